#include "muskat/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace muskat {

namespace {

// C^2 quintic smoothstep on [0,1]
double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smoothstep5_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}
double smoothstep5_dd(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

} // namespace

void DomainSpec::check() const {
    if (!(a > 0 && a1 > a && a2_len > 0))
        throw std::invalid_argument("DomainSpec: need 0 < a < a1 and a2 > 0");
    if (!(delta0 > 0 && delta0 < PI / 2 && delta1 > 0 && delta1 < PI / 2))
        throw std::invalid_argument("DomainSpec: contact angles must be in (0, pi/2)");
    double cap = std::min({(a1 - a) / 6.0, a / 6.0, a2_len / 6.0});
    if (!(eps > 0 && eps < cap))
        throw std::invalid_argument("DomainSpec: eps must satisfy 0 < eps < min{(a1-a)/6, a/6, a2/6}");
}

InterfaceCurve::InterfaceCurve(const DomainSpec& spec) {
    a_ = spec.a;
    amp0_ = std::tan(spec.delta0);
    amp1_ = std::tan(spec.delta1);
    sine_ = std::abs(spec.delta0 - spec.delta1) < 1e-14;
    // arc-length table by composite Simpson on a fine grid
    const int N = 4096;
    omega_knots_.resize(N + 1);
    t_knots_.resize(N + 1);
    double acc = 0.0;
    double prev_t = 0.0;
    omega_knots_[0] = 0.0;
    t_knots_[0] = 0.0;
    auto speed = [&](double t) { return std::sqrt(1.0 + dg(t) * dg(t)); };
    for (int i = 1; i <= N; ++i) {
        double t = a_ * double(i) / N;
        double tm = 0.5 * (prev_t + t);
        acc += (t - prev_t) / 6.0 * (speed(prev_t) + 4.0 * speed(tm) + speed(t));
        omega_knots_[i] = acc;
        t_knots_[i] = t;
        prev_t = t;
    }
    length_ = acc;
    // self-intersection / positivity guard
    for (int i = 1; i < N; ++i) {
        if (!(g(a_ * double(i) / N) > 0.0))
            throw std::invalid_argument("InterfaceCurve: profile must stay positive between corners");
    }
}

double InterfaceCurve::g(double t) const {
    if (sine_) return (a_ * amp0_ / PI) * std::sin(PI * t / a_);
    double u = t / a_;
    return amp0_ * t * (1 - u) * (1 - u) + amp1_ * t * u * (1 - u);
}

double InterfaceCurve::dg(double t) const {
    if (sine_) return amp0_ * std::cos(PI * t / a_);
    double u = t / a_;
    return amp0_ * (1 - u) * (1 - 3 * u) + amp1_ * u * (2 - 3 * u);
}

double InterfaceCurve::ddg(double t) const {
    if (sine_) return -(amp0_ * PI / a_) * std::sin(PI * t / a_);
    double u = t / a_;
    return (amp0_ * (6 * u - 4) + amp1_ * (2 - 6 * u)) / a_;
}

double InterfaceCurve::t_of_omega(double omega) const {
    omega = std::clamp(omega, 0.0, length_);
    auto it = std::lower_bound(omega_knots_.begin(), omega_knots_.end(), omega);
    size_t i = std::min(size_t(it - omega_knots_.begin()), omega_knots_.size() - 1);
    if (i == 0) return 0.0;
    double w0 = omega_knots_[i - 1], w1 = omega_knots_[i];
    double f = (omega - w0) / (w1 - w0);
    double t = t_knots_[i - 1] + f * (t_knots_[i] - t_knots_[i - 1]);
    // one Newton step on omega(t)
    double sp = std::sqrt(1.0 + dg(t) * dg(t));
    t -= (omega_of_t(t) - omega) / sp;
    return std::clamp(t, 0.0, a_);
}

double InterfaceCurve::omega_of_t(double t) const {
    t = std::clamp(t, 0.0, a_);
    auto it = std::lower_bound(t_knots_.begin(), t_knots_.end(), t);
    size_t i = std::min(size_t(it - t_knots_.begin()), t_knots_.size() - 1);
    if (i == 0) return 0.0;
    double t0 = t_knots_[i - 1], t1 = t_knots_[i];
    double f = (t - t0) / (t1 - t0);
    return omega_knots_[i - 1] + f * (omega_knots_[i] - omega_knots_[i - 1]);
}

Vec2 InterfaceCurve::point(double omega) const {
    double t = t_of_omega(omega);
    return {g(t), t};
}

Vec2 InterfaceCurve::tangent(double omega) const {
    double t = t_of_omega(omega);
    double d = dg(t);
    double s = std::sqrt(1.0 + d * d);
    return {d / s, 1.0 / s};
}

Vec2 InterfaceCurve::normal(double omega) const {
    double t = t_of_omega(omega);
    double d = dg(t);
    double s = std::sqrt(1.0 + d * d);
    return {1.0 / s, -d / s};
}

double InterfaceCurve::curvature(double omega) const {
    double t = t_of_omega(omega);
    double d = dg(t), dd = ddg(t);
    return dd / std::pow(1.0 + d * d, 1.5);
}

InterfaceChart::InterfaceChart(const DomainSpec& spec, const InterfaceCurve& curve)
    : curve_(&curve), eps_(spec.eps), length_(curve.length()) {
    // b0: injectivity bound for the sheared tube chart, capped by eps/2
    double geo = 1e9;
    const int M = 512;
    for (int i = 1; i < M; ++i) {
        double w = length_ * double(i) / M;
        Vec2 lp = l_field_deriv(w);
        Vec2 l = l_field(w);
        Vec2 lperp{-l.y, l.x};
        Vec2 mp = curve.tangent(w);
        double num = std::abs(mp.dot(lperp));
        double den = std::abs(lp.dot(lperp));
        if (den > 1e-12) geo = std::min(geo, num / den);
        // transversality guard
        if (num < 1e-6)
            throw std::invalid_argument("InterfaceChart: transversal field degenerates");
    }
    b0_ = std::min(0.4 * geo, 0.5 * eps_);
    eps1_ = eps_ / (4.0 * b0_);
    // quintic plateau: max |chi'| = 1.875 / (eps1 b0); C0 = b0 * max|chi'|
    chi_slope_bound_ = 1.875 / eps1_;
}

Vec2 InterfaceChart::l_field(double omega) const {
    const double L = length_;
    auto angle_n = [&](double w) {
        Vec2 n = curve_->normal(w);
        return std::atan2(n.y, n.x);
    };
    if (omega <= eps_) return {0.0, -1.0};
    if (omega >= L - eps_) return {0.0, 1.0};
    if (omega < 2.0 * eps_) {
        double tblend = smoothstep5((omega - eps_) / eps_);
        double phi = (1.0 - tblend) * (-PI / 2) + tblend * angle_n(omega);
        return {std::cos(phi), std::sin(phi)};
    }
    if (omega > L - 2.0 * eps_) {
        double tblend = smoothstep5((L - eps_ - omega) / eps_);
        double phi = (1.0 - tblend) * (PI / 2) + tblend * angle_n(omega);
        return {std::cos(phi), std::sin(phi)};
    }
    return curve_->normal(omega);
}

Vec2 InterfaceChart::l_field_deriv(double omega) const {
    const double h = 1e-6 * std::max(length_, 1.0);
    Vec2 p = l_field(std::min(omega + h, length_));
    Vec2 m = l_field(std::max(omega - h, 0.0));
    return (p - m) * (1.0 / (2.0 * h));
}

double InterfaceChart::chi(double lambda) const {
    double al = std::abs(lambda), w = eps1_ * b0_;
    if (al <= w) return 1.0;
    if (al >= 2.0 * w) return 0.0;
    return 1.0 - smoothstep5((al - w) / w);
}

double InterfaceChart::chi_deriv(double lambda) const {
    double al = std::abs(lambda), w = eps1_ * b0_;
    if (al <= w || al >= 2.0 * w) return 0.0;
    double d = -smoothstep5_d((al - w) / w) / w;
    return lambda >= 0 ? d : -d;
}

double InterfaceChart::chi_dderiv(double lambda) const {
    double al = std::abs(lambda), w = eps1_ * b0_;
    if (al <= w || al >= 2.0 * w) return 0.0;
    return -smoothstep5_dd((al - w) / w) / (w * w);
}

Vec2 InterfaceChart::chart_point(double omega, double lambda) const {
    return curve_->point(omega) + lambda * l_field(omega);
}

Mat2 InterfaceChart::chart_jacobian(double omega, double lambda) const {
    Vec2 mp = curve_->tangent(omega);
    Vec2 lp = l_field_deriv(omega);
    Vec2 l = l_field(omega);
    Vec2 c0 = mp + lambda * lp; // d x / d omega
    return {c0.x, l.x, c0.y, l.y};
}

bool InterfaceChart::chart_coords(Vec2 x, double& omega, double& lambda) const {
    // initial guess: nearest sample station
    const int M = 256;
    double best_w = 0.0, best_d = 1e30;
    for (int i = 0; i <= M; ++i) {
        double w = length_ * double(i) / M;
        double d = (x - curve_->point(w)).norm();
        if (d < best_d) {
            best_d = d;
            best_w = w;
        }
    }
    if (best_d > 2.5 * b0_) return false;
    double w = best_w, lam = 0.0;
    for (int it = 0; it < 60; ++it) {
        Vec2 r = chart_point(w, lam) - x;
        if (r.norm() < 1e-13) break;
        Mat2 J = chart_jacobian(w, lam);
        Vec2 dwl = J.inverse().apply(r);
        w -= dwl.x;
        lam -= dwl.y;
        w = std::clamp(w, 0.0, length_);
    }
    if ((chart_point(w, lam) - x).norm() > 1e-9) return false;
    omega = w;
    lambda = lam;
    return std::abs(lam) < 2.0 * b0_;
}

HanzawaMap::HanzawaMap(const InterfaceChart& chart, DisplacementField field)
    : chart_(&chart), field_(std::move(field)) {}

Vec2 HanzawaMap::forward(Vec2 x) const {
    double w, lam;
    if (!chart_->chart_coords(x, w, lam)) return x;
    double c = chart_->chi(lam);
    if (c == 0.0) return x;
    return x + c * field_.s(w) * chart_->l_field(w);
}

Vec2 HanzawaMap::inverse(Vec2 y) const {
    double w, eta;
    if (!chart_->chart_coords(y, w, eta)) return y;
    double sv = field_.s(w);
    if (sv == 0.0) return y;
    // solve lambda + chi(lambda) s = eta; monotone in lambda
    double lam = eta - chart_->chi(eta) * sv;
    for (int it = 0; it < 80; ++it) {
        double f = lam + chart_->chi(lam) * sv - eta;
        if (std::abs(f) < 1e-14) break;
        double df = 1.0 + chart_->chi_deriv(lam) * sv;
        lam -= f / df;
    }
    if (std::abs(lam) >= 2.0 * chart_->b0()) return y;
    return chart_->chart_point(w, lam);
}

Mat2 HanzawaMap::jacobian(Vec2 x) const {
    double w, lam;
    if (!chart_->chart_coords(x, w, lam)) return {};
    return jacobian_at(w, lam);
}

Mat2 HanzawaMap::jacobian_at(double w, double lam) const {
    double c = chart_->chi(lam);
    double cd = chart_->chi_deriv(lam);
    if (c == 0.0 && cd == 0.0) return {};
    double sv = field_.s(w), sd = field_.s_omega(w);
    // y = x + chi(lam) s(w) l(w);   grad w, grad lam from the chart jacobian
    Mat2 Jc = chart_->chart_jacobian(w, lam);
    Mat2 Jci = Jc.inverse();             // rows: grad w, grad lam
    Vec2 grad_w{Jci.a, Jci.b}, grad_lam{Jci.c, Jci.d};
    Vec2 l = chart_->l_field(w);
    Vec2 lp = chart_->l_field_deriv(w);
    // dy = dx + l (chi' s grad_lam + chi s' grad_w)^T dx + chi s l' grad_w^T dx
    Vec2 u = cd * sv * grad_lam + c * sd * grad_w;
    Mat2 J{1.0 + l.x * u.x + c * sv * lp.x * grad_w.x,
           l.x * u.y + c * sv * lp.x * grad_w.y,
           l.y * u.x + c * sv * lp.y * grad_w.x,
           1.0 + l.y * u.y + c * sv * lp.y * grad_w.y};
    return J;
}

double HanzawaMap::min_jacobian_det(int samples) const {
    double mind = 1e30;
    const double L = chart_->curve().length();
    for (int i = 0; i <= samples; ++i) {
        double w = L * double(i) / samples;
        for (double lam : {-1.5 * chart_->b0(), -0.5 * chart_->b0(), 0.0,
                           0.5 * chart_->b0(), 1.5 * chart_->b0()}) {
            Vec2 x = chart_->chart_point(w, lam);
            mind = std::min(mind, jacobian(x).det());
        }
    }
    return mind;
}

void HanzawaMap::metric_coeffs(double omega, double& S, double& S1) const {
    Vec2 gl, gw;
    chart_gradients(chart_->chart_point(omega, 0.0), gl, gw);
    S = gl.dot(gl);
    S1 = gw.dot(gl);
}

void HanzawaMap::chart_gradients(Vec2 x, Vec2& grad_lambda, Vec2& grad_omega) const {
    double w, lam;
    if (!chart_->chart_coords(x, w, lam))
        throw std::domain_error("chart_gradients: point outside the tube");
    chart_gradients_at(w, lam, grad_lambda, grad_omega);
}

void HanzawaMap::chart_gradients_at(double w, double lam, Vec2& grad_lambda,
                                    Vec2& grad_omega) const {
    Mat2 Jc = chart_->chart_jacobian(w, lam);
    Mat2 Jci = Jc.inverse();
    Vec2 gw{Jci.a, Jci.b}, gl{Jci.c, Jci.d};      // gradients in x of omega, lambda
    Mat2 J = jacobian_at(w, lam);                  // d y / d x
    Mat2 JiT = J.inverse().transpose();
    grad_omega = JiT.apply(gw);
    grad_lambda = JiT.apply(gl);
}

Vec2 log_polar(Vec2 y) {
    double r2 = y.x * y.x + y.y * y.y;
    if (r2 == 0.0) throw std::domain_error("log_polar: origin rejected");
    return {0.5 * std::log(r2), std::atan2(y.y, y.x)};
}

Vec2 log_polar_inverse(Vec2 x) {
    double r = std::exp(x.x);
    return {r * std::cos(x.y), r * std::sin(x.y)};
}

Geometry::Geometry(const DomainSpec& spec)
    : spec_(spec), curve_((spec.check(), spec)), chart_(spec, curve_) {
    // outer arc through (0, a1) and (0, -a2): circle centered on the segment's
    // perpendicular bisector, bulging into y1 > 0
    Vec2 top{0.0, spec_.a1}, bot{0.0, -spec_.a2_len};
    double half = 0.5 * (spec_.a1 + spec_.a2_len);
    double r = spec_.outer_radius > 0 ? spec_.outer_radius : 1.25 * half;
    if (r < half * 1.01) r = half * 1.01;
    double off = std::sqrt(r * r - half * half);
    outer_center_ = {-off, 0.5 * (spec_.a1 - spec_.a2_len)};
    outer_r_ = r;
    outer_phi0_ = std::atan2(top.y - outer_center_.y, top.x - outer_center_.x);
    outer_phi1_ = std::atan2(bot.y - outer_center_.y, bot.x - outer_center_.x);
    // interface must stay inside the outer arc
    for (int i = 0; i <= 64; ++i) {
        Vec2 m = curve_.point(curve_.length() * i / 64.0);
        if ((m - outer_center_).norm() > 0.98 * outer_r_)
            throw std::invalid_argument("Geometry: interface reaches the outer boundary");
    }
}

Vec2 Geometry::outer_point(double t) const {
    double phi = outer_phi0_ + (outer_phi1_ - outer_phi0_) * t;
    return {outer_center_.x + outer_r_ * std::cos(phi), outer_center_.y + outer_r_ * std::sin(phi)};
}

double Geometry::outer_length() const {
    return std::abs(outer_phi1_ - outer_phi0_) * outer_r_;
}

double Geometry::contact_angle(int corner) const {
    double slope = corner == 0 ? curve_.dg(0.0) : -curve_.dg(spec_.a);
    return std::atan(slope); // angle to the y2-axis: tan(delta) = dg at the corner
}

double Geometry::corner_distance(Vec2 x) const {
    return std::min((x - corner(0)).norm(), (x - corner(1)).norm());
}

double weighted_sup_norm(const Geometry& geom, const std::vector<Vec2>& points,
                         const std::vector<double>& values, double s) {
    double m = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        double r = geom.corner_distance(points[i]);
        if (r < 1e-14) continue;
        m = std::max(m, std::pow(r, -s) * std::abs(values[i]));
    }
    return m;
}

} // namespace muskat
