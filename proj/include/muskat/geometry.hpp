#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "muskat/special_functions.hpp"

// Initial geometry of the two-phase configuration: the interface Gamma joins
// the corner points A0 = (0,0) and A1 = (0, a) on the y2-axis; Omega2 is the
// lens between the axis segment Gamma2 and Gamma, Omega1 the outer region
// bounded by the remaining axis pieces and an outer arc (together Gamma1).
// The interface meets the axis at contact angles delta0, delta1 measured
// from the axis.

namespace muskat {

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Mat2 {
    // row-major: a b / c d
    double a = 1, b = 0, c = 0, d = 1;
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2 transpose() const { return {a, c, b, d}; }
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

struct DomainSpec {
    double a = 1.0;        // corner separation, A1 = (0, a)
    double a1 = 1.5;       // Gamma1 axis extent above A1
    double a2_len = 0.5;   // Gamma1 axis extent below A0
    double delta0 = PI / 6;
    double delta1 = PI / 6;
    double eps = 0.08;     // neighborhood radius; must be < min{(a1-a)/6, a/6, a2/6}
    double outer_radius = 0.0; // 0: pick automatically

    void check() const;    // throws std::invalid_argument on violation
};

// Interface as a graph y1 = g(y2), y2 in [0, a]; sine bump for equal angles,
// cubic Hermite profile otherwise (exact endpoint slopes either way).
class InterfaceCurve {
  public:
    explicit InterfaceCurve(const DomainSpec& spec);

    double g(double t) const;
    double dg(double t) const;
    double ddg(double t) const;

    double length() const { return length_; }
    double t_of_omega(double omega) const;   // y2 as a function of arc length
    double omega_of_t(double t) const;
    Vec2 point(double omega) const;          // m(omega)
    Vec2 tangent(double omega) const;        // unit tangent m'
    Vec2 normal(double omega) const;         // unit normal into Omega1
    double curvature(double omega) const;

  private:
    double a_ = 1.0, amp0_ = 0.0, amp1_ = 0.0;
    bool sine_ = true;
    double length_ = 0.0;
    std::vector<double> omega_knots_, t_knots_;  // arc-length table
};

// Transversal field, cut-off and the interface tube chart.
class InterfaceChart {
  public:
    InterfaceChart(const DomainSpec& spec, const InterfaceCurve& curve);

    // three-branch transversal field of unit length, C^2 in omega
    Vec2 l_field(double omega) const;
    Vec2 l_field_deriv(double omega) const;

    double b0() const { return b0_; }
    double eps1() const { return eps1_; }
    double chi_slope_bound() const { return chi_slope_bound_; } // reported C0 with |chi'| <= C0/b0

    double chi(double lambda) const;
    double chi_deriv(double lambda) const;
    double chi_dderiv(double lambda) const;

    // tube chart x = m(omega) + lambda l(omega); returns false outside the tube
    bool chart_coords(Vec2 x, double& omega, double& lambda) const;
    Vec2 chart_point(double omega, double lambda) const;

    // d x / d(omega, lambda) columns
    Mat2 chart_jacobian(double omega, double lambda) const;

    const InterfaceCurve& curve() const { return *curve_; }
    double eps() const { return eps_; }

  private:
    const InterfaceCurve* curve_;
    double eps_ = 0.0, b0_ = 0.0, eps1_ = 0.0, chi_slope_bound_ = 0.0;
    double length_ = 0.0;
};

// Displacement field s(omega) with derivative, as used by the Hanzawa map.
struct DisplacementField {
    std::function<double(double)> s;
    std::function<double(double)> s_omega;
};

// Hanzawa-type map y = x + chi(lambda) s(omega) l(omega) inside the tube,
// identity outside.
class HanzawaMap {
  public:
    HanzawaMap(const InterfaceChart& chart, DisplacementField field);

    Vec2 forward(Vec2 x) const;
    Vec2 inverse(Vec2 y) const;       // Newton on the lambda equation
    Mat2 jacobian(Vec2 x) const;      // d y / d x
    double min_jacobian_det(int samples = 400) const;

    // metric coefficients S = <grad_s lambda, grad_s lambda>,
    // S1 = <grad_s omega, grad_s lambda> on Gamma (lambda = 0)
    void metric_coeffs(double omega, double& S, double& S1) const;

    // grad_s of the chart functions at a point x (for velocity extraction)
    void chart_gradients(Vec2 x, Vec2& grad_lambda, Vec2& grad_omega) const;

    // variants taking precomputed tube coordinates (the chart is fixed, so
    // mesh-point coordinates are computed once and reused every step)
    Mat2 jacobian_at(double omega, double lambda) const;
    void chart_gradients_at(double omega, double lambda, Vec2& grad_lambda,
                            Vec2& grad_omega) const;

    const InterfaceChart& chart() const { return *chart_; }

  private:
    const InterfaceChart* chart_;
    DisplacementField field_;
};

// Log-polar map x1 = ln|y|, x2 = arctan(y2/y1) and inverse.
Vec2 log_polar(Vec2 y);
Vec2 log_polar_inverse(Vec2 x);

// Full geometry: curve, chart, outer boundary.
class Geometry {
  public:
    explicit Geometry(const DomainSpec& spec);

    const DomainSpec& spec() const { return spec_; }
    const InterfaceCurve& curve() const { return curve_; }
    const InterfaceChart& chart() const { return chart_; }

    // outer boundary arc from (0, a1) to (0, -a2_len), parameter in [0, 1]
    Vec2 outer_point(double t) const;
    double outer_length() const;

    // contact angles measured from the analytic chart (exact derivative)
    double contact_angle(int corner) const;

    Vec2 corner(int i) const { return i == 0 ? Vec2{0.0, 0.0} : Vec2{0.0, spec_.a}; }

    // min over i of distance of x to corner A_i
    double corner_distance(Vec2 x) const;

  private:
    DomainSpec spec_;
    InterfaceCurve curve_;
    InterfaceChart chart_;
    Vec2 outer_center_;
    double outer_r_ = 0.0, outer_phi0_ = 0.0, outer_phi1_ = 0.0;
};

// discrete weighted sup-norm: max over nodes of r^{-s} |v| (corner nodes skipped)
double weighted_sup_norm(const Geometry& geom, const std::vector<Vec2>& points,
                         const std::vector<double>& values, double s);

} // namespace muskat
