#include "muskat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace muskat {

namespace {

// two-sided power clustering on [0,1], blended with a small linear part so
// stations never collapse to degenerate spacings on very fine meshes
double cluster2(double t, double gamma) {
    double tg = std::pow(t, gamma), og = std::pow(1.0 - t, gamma);
    double w = tg / (tg + og);
    const double beta = 1e-4;
    return (1.0 - beta) * w + beta * t;
}

// one-sided clustering toward t = 0
double cluster1(double t, double gamma) { return std::pow(t, gamma); }

// layer fractions on [0,1]: geometric growth from first_frac, capped so the
// far cells still scale like 1/n (pure geometric ladders leave an O(1) last
// cell that never refines)
std::vector<double> geometric_layers(double first_frac, int n) {
    std::vector<double> w(n + 1);
    first_frac = std::clamp(first_frac, 1e-7, 1.0 / n);
    const double cap = 2.5 / n;
    auto total = [&](double rho) {
        double cell = first_frac, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += std::min(cell, cap);
            cell *= rho;
        }
        return sum;
    };
    double lo = 1.0 + 1e-12, hi = 8.0;
    if (total(hi) < 1.0) {
        for (int i = 0; i <= n; ++i) w[i] = double(i) / n;
        return w;
    }
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (total(mid) < 1.0 ? lo : hi) = mid;
    }
    double rho = 0.5 * (lo + hi);
    w[0] = 0.0;
    double cell = first_frac;
    for (int i = 1; i <= n; ++i) {
        w[i] = w[i - 1] + std::min(cell, cap);
        cell *= rho;
    }
    for (int i = 0; i <= n; ++i) w[i] /= w[n];
    return w;
}

struct Builder {
    Mesh mesh;
    int add_node(Vec2 p, int tag) {
        mesh.nodes.push_back(p);
        mesh.node_tags.push_back(tag);
        return int(mesh.nodes.size()) - 1;
    }
    void add_tri(int a, int b, int c, int region) {
        // enforce CCW
        Vec2 A = mesh.nodes[a], B = mesh.nodes[b], C = mesh.nodes[c];
        double ar = (B - A).cross(C - A);
        if (std::abs(ar) < 1e-16)
            throw std::runtime_error("build_mesh: degenerate triangle");
        if (ar < 0) std::swap(b, c);
        mesh.tris.push_back({{a, b, c}, region});
    }
    // split quad (a b c d) into two triangles along the better diagonal
    void add_quad(int a, int b, int c, int d, int region) {
        Vec2 A = mesh.nodes[a], B = mesh.nodes[b], C = mesh.nodes[c], D = mesh.nodes[d];
        double dac = (C - A).norm(), dbd = (D - B).norm();
        if (dac <= dbd) {
            add_tri(a, b, c, region);
            add_tri(a, c, d, region);
        } else {
            add_tri(a, b, d, region);
            add_tri(b, c, d, region);
        }
    }
};

} // namespace

double Mesh::tri_area(int t) const {
    const Tri& tr = tris[t];
    Vec2 A = nodes[tr.v[0]], B = nodes[tr.v[1]], C = nodes[tr.v[2]];
    return 0.5 * std::abs((B - A).cross(C - A));
}

Mesh build_mesh(const Geometry& geom, const MeshControls& mc) {
    const DomainSpec& spec = geom.spec();
    const InterfaceCurve& curve = geom.curve();
    const double L = curve.length();
    Builder bld;

    // ---- interface stations, graded toward both corners
    const int M = mc.n_interface;
    std::vector<double> omega(M + 1);
    for (int j = 0; j <= M; ++j) omega[j] = L * cluster2(double(j) / M, mc.grading);

    // ---- lens (Omega2) columns
    const int NL = mc.n_layers_lens;
    int A0 = bld.add_node({0.0, 0.0}, TAG_GAMMA | TAG_GAMMA1 | TAG_GAMMA2);
    int A1 = bld.add_node({0.0, spec.a}, TAG_GAMMA | TAG_GAMMA1 | TAG_GAMMA2);
    bld.mesh.corner_a0 = A0;
    bld.mesh.corner_a1 = A1;

    std::vector<std::vector<int>> col(M + 1);
    col[0] = {A0};
    col[M] = {A1};
    std::vector<int> iface(M + 1);
    iface[0] = A0;
    iface[M] = A1;
    for (int j = 1; j < M; ++j) {
        double t = curve.t_of_omega(omega[j]);
        double gx = curve.g(t);
        col[j].resize(NL + 1);
        for (int i = 0; i <= NL; ++i) {
            double u = double(i) / NL;
            int tag = i == 0 ? TAG_GAMMA2 : (i == NL ? TAG_GAMMA : 0);
            col[j][i] = bld.add_node({u * gx, t}, tag);
        }
        iface[j] = col[j][NL];
    }
    // corner fans
    for (int i = 0; i < NL; ++i) {
        bld.add_tri(A0, col[1][i], col[1][i + 1], 2);
        bld.add_tri(A1, col[M - 1][i + 1], col[M - 1][i], 2);
    }
    // interior quads
    for (int j = 1; j + 1 < M; ++j)
        for (int i = 0; i < NL; ++i)
            bld.add_quad(col[j][i], col[j + 1][i], col[j + 1][i + 1], col[j][i + 1], 2);

    // ---- outer region (Omega1): inner chain
    struct ChainPt {
        int node;
        double arc;
    };
    std::vector<ChainPt> chain;
    double arc = 0.0;
    // top axis: (0, a1) -> A1, graded toward A1
    {
        int NT = mc.n_axis_top;
        Vec2 prev{0.0, spec.a1};
        int id = bld.add_node(prev, TAG_GAMMA1);
        chain.push_back({id, 0.0});
        for (int i = 1; i <= NT; ++i) {
            double f = 1.0 - cluster1(1.0 - double(i) / NT, mc.grading); // cluster at A1
            Vec2 p{0.0, spec.a1 - f * (spec.a1 - spec.a)};
            arc += (p - prev).norm();
            prev = p;
            if (i == NT) {
                chain.push_back({A1, arc});
            } else {
                chain.push_back({bld.add_node(p, TAG_GAMMA1), arc});
            }
        }
    }
    // interface: A1 -> A0 (reuse lens interface nodes, reversed)
    {
        Vec2 prev = bld.mesh.nodes[A1];
        for (int j = M - 1; j >= 0; --j) {
            Vec2 p = bld.mesh.nodes[iface[j]];
            arc += (p - prev).norm();
            prev = p;
            chain.push_back({iface[j], arc});
        }
    }
    // bottom axis: A0 -> (0, -a2), graded away from A0
    {
        int NB = mc.n_axis_bottom;
        Vec2 prev{0.0, 0.0};
        for (int i = 1; i <= NB; ++i) {
            double f = cluster1(double(i) / NB, mc.grading);
            Vec2 p{0.0, -f * spec.a2_len};
            arc += (p - prev).norm();
            prev = p;
            chain.push_back({bld.add_node(p, TAG_GAMMA1), arc});
        }
    }
    const double chain_len = arc;
    const int R = int(chain.size()) - 1;

    // outer stations, arc-proportional to the inner chain
    std::vector<int> outer_ids(R + 1);
    outer_ids[0] = chain[0].node;           // shared endpoint (0, a1)
    outer_ids[R] = chain[R].node;           // shared endpoint (0, -a2)
    for (int r = 1; r < R; ++r) {
        double tau = chain[r].arc / chain_len;
        outer_ids[r] = bld.add_node(geom.outer_point(tau), TAG_GAMMA1);
    }

    // rays with geometric layers; first cell matched to local inner spacing
    const int NO = mc.n_layers_outer;
    std::vector<std::vector<int>> ray(R + 1);
    ray[0] = std::vector<int>(NO + 1, chain[0].node);
    ray[R] = std::vector<int>(NO + 1, chain[R].node);
    for (int r = 1; r < R; ++r) {
        Vec2 in = bld.mesh.nodes[chain[r].node];
        Vec2 out = bld.mesh.nodes[outer_ids[r]];
        double D = (out - in).norm();
        double ds = 0.5 * ((bld.mesh.nodes[chain[r].node] - bld.mesh.nodes[chain[r - 1].node]).norm() +
                           (bld.mesh.nodes[chain[r + 1].node] - bld.mesh.nodes[chain[r].node]).norm());
        std::vector<double> w = geometric_layers(ds / D, NO);
        ray[r].resize(NO + 1);
        ray[r][0] = chain[r].node;
        ray[r][NO] = outer_ids[r];
        for (int i = 1; i < NO; ++i)
            ray[r][i] = bld.add_node(in + w[i] * (out - in), 0);
    }
    // end fans at the pinched endpoints
    for (int i = 0; i < NO; ++i) {
        if (ray[1][i] != ray[1][i + 1])
            bld.add_tri(chain[0].node, ray[1][i + 1], ray[1][i], 1);
        if (ray[R - 1][i] != ray[R - 1][i + 1])
            bld.add_tri(chain[R].node, ray[R - 1][i], ray[R - 1][i + 1], 1);
    }
    for (int r = 1; r + 1 < R; ++r)
        for (int i = 0; i < NO; ++i)
            bld.add_quad(ray[r][i], ray[r][i + 1], ray[r + 1][i + 1], ray[r + 1][i], 1);

    // ---- boundary edges
    Mesh& mesh = bld.mesh;
    for (int j = 0; j < M; ++j) mesh.bedges.push_back({iface[j], iface[j + 1], TAG_GAMMA});
    for (int j = 1; j < M; ++j) mesh.bedges.push_back({col[j][0], col[j + 1 < M ? j + 1 : M][0], TAG_GAMMA2});
    mesh.bedges.push_back({A0, col[1][0], TAG_GAMMA2});

    mesh.interface_nodes.assign(iface.begin(), iface.end());
    mesh.interface_omega = omega;

    double hmax = 0.0;
    for (size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tr = mesh.tris[t];
        for (int e = 0; e < 3; ++e) {
            double len = (mesh.nodes[tr.v[e]] - mesh.nodes[tr.v[(e + 1) % 3]]).norm();
            hmax = std::max(hmax, len);
        }
        if (mesh.tri_area(int(t)) <= 0)
            throw std::runtime_error("build_mesh: non-positive triangle area");
    }
    mesh.h_max = hmax;
    return mesh;
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_mesh_text: cannot open " + path);
    f << "# nodes " << mesh.nodes.size() << " tris " << mesh.tris.size() << "\n";
    f << "# n <id> <x> <y> <tags>   t <id> <v0> <v1> <v2> <region>\n";
    f.precision(17);
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
        f << "n " << i << ' ' << mesh.nodes[i].x << ' ' << mesh.nodes[i].y << ' '
          << mesh.node_tags[i] << "\n";
    for (size_t t = 0; t < mesh.tris.size(); ++t)
        f << "t " << t << ' ' << mesh.tris[t].v[0] << ' ' << mesh.tris[t].v[1] << ' '
          << mesh.tris[t].v[2] << ' ' << mesh.tris[t].region << "\n";
}

double mesh_contact_angle(const Mesh& mesh, int corner) {
    if (mesh.interface_nodes.size() < 2) throw std::runtime_error("mesh_contact_angle: no interface");
    Vec2 c, n;
    if (corner == 0) {
        c = mesh.nodes[mesh.interface_nodes.front()];
        n = mesh.nodes[mesh.interface_nodes[1]];
        Vec2 d = n - c;
        return std::atan2(d.x, d.y); // angle to the +y2 axis
    }
    c = mesh.nodes[mesh.interface_nodes.back()];
    n = mesh.nodes[mesh.interface_nodes[mesh.interface_nodes.size() - 2]];
    Vec2 d = n - c;
    return std::atan2(d.x, -d.y); // angle to the -y2 axis
}

} // namespace muskat
