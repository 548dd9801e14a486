#include "muskat/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace muskat {

SkylineMatrix::SkylineMatrix(const std::vector<std::vector<int>>& adjacency) {
    n_ = int(adjacency.size());
    col_start_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        int lo = j;
        for (int i : adjacency[j]) lo = std::min(lo, i);
        col_start_[j] = lo;
    }
    offset_.resize(n_ + 1);
    offset_[0] = 0;
    for (int j = 0; j < n_; ++j) offset_[j + 1] = offset_[j] + (j - col_start_[j]);
    data_.assign(offset_[n_], 0.0);
    diag_.assign(n_, 0.0);
}

double& SkylineMatrix::at(int i, int j) {
    if (i == j) return diag_[j];
    if (i < col_start_[j]) throw std::logic_error("SkylineMatrix: outside envelope");
    return data_[offset_[j] + (i - col_start_[j])];
}

void SkylineMatrix::add(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    at(i, j) += v;
}

void SkylineMatrix::set_identity_row(int i) {
    diag_[i] = 1.0;
    // clear stored column i
    for (int r = col_start_[i]; r < i; ++r) data_[offset_[i] + (r - col_start_[i])] = 0.0;
    // clear entries (i, j) for j > i
    for (int j = i + 1; j < n_; ++j)
        if (col_start_[j] <= i) data_[offset_[j] + (i - col_start_[j])] = 0.0;
}

void SkylineMatrix::factorize() {
    // column-oriented LDL^T within the envelope; during column j the stored
    // entries hold c_kj = D_k L_jk until the final division
    for (int j = 0; j < n_; ++j) {
        const int lo = col_start_[j];
        for (int i = lo; i < j; ++i) {
            double sum = at(i, j);
            int klo = std::max(lo, col_start_[i]);
            for (int k = klo; k < i; ++k)
                sum -= at(k, i) * at(k, j); // L_ik * c_kj
            at(i, j) = sum;
        }
        double d = diag_[j];
        for (int k = lo; k < j; ++k) {
            double lkj = at(k, j) / diag_[k];
            d -= at(k, j) * lkj;
            at(k, j) = lkj; // store L(j,k)
        }
        if (d <= 0.0) throw std::runtime_error("SkylineMatrix: matrix not positive definite");
        diag_[j] = d;
    }
    factorized_ = true;
}

std::vector<double> SkylineMatrix::solve(std::vector<double> rhs) const {
    if (!factorized_) throw std::logic_error("SkylineMatrix: factorize first");
    // forward: L^T stored by columns; L y = b
    for (int j = 0; j < n_; ++j) {
        double xj = rhs[j];
        for (int k = col_start_[j]; k < j; ++k)
            xj -= data_[offset_[j] + (k - col_start_[j])] * rhs[k];
        rhs[j] = xj;
    }
    for (int j = 0; j < n_; ++j) rhs[j] /= diag_[j];
    // backward: L^T x = y
    for (int j = n_ - 1; j >= 0; --j) {
        double xj = rhs[j];
        for (int k = col_start_[j]; k < j; ++k)
            rhs[k] -= data_[offset_[j] + (k - col_start_[j])] * xj;
        rhs[j] = xj;
    }
    return rhs;
}

std::vector<std::vector<int>> node_to_tris(const Mesh& mesh) {
    std::vector<std::vector<int>> nt(mesh.nodes.size());
    for (size_t t = 0; t < mesh.tris.size(); ++t)
        for (int e = 0; e < 3; ++e) nt[mesh.tris[t].v[e]].push_back(int(t));
    return nt;
}

Vec2 tri_gradient(const Mesh& mesh, int t, const std::vector<double>& nodal) {
    const auto& tr = mesh.tris[t];
    Vec2 A = mesh.nodes[tr.v[0]], B = mesh.nodes[tr.v[1]], C = mesh.nodes[tr.v[2]];
    double det = (B - A).cross(C - A);
    double ua = nodal[tr.v[0]], ub = nodal[tr.v[1]], uc = nodal[tr.v[2]];
    // grad = sum u_i grad phi_i
    Vec2 gA{(B.y - C.y) / det, (C.x - B.x) / det};
    Vec2 gB{(C.y - A.y) / det, (A.x - C.x) / det};
    Vec2 gC{(A.y - B.y) / det, (B.x - A.x) / det};
    return ua * gA + ub * gB + uc * gC;
}

Vec2 recover_gradient(const Mesh& mesh, int node, int region,
                      const std::vector<double>& nodal,
                      const std::vector<std::vector<int>>& node_tris) {
    // two-ring patch of same-region elements; the element gradients are
    // extrapolated linearly to the node (one-sided, Richardson-corrected)
    std::vector<int> patch;
    auto add_ring = [&](const std::vector<int>& seeds) {
        for (int t : seeds) {
            if (mesh.tris[t].region != region) continue;
            if (std::find(patch.begin(), patch.end(), t) == patch.end()) patch.push_back(t);
        }
    };
    add_ring(node_tris[node]);
    std::vector<int> ring1 = patch;
    for (int t : ring1)
        for (int e = 0; e < 3; ++e) add_ring(node_tris[mesh.tris[t].v[e]]);
    if (patch.empty()) throw std::runtime_error("recover_gradient: node has no elements in region");

    Vec2 origin = mesh.nodes[node];
    if (patch.size() < 5) {
        Vec2 g{0, 0};
        double wsum = 0.0;
        for (int t : patch) {
            double w = mesh.tri_area(t);
            g = g + w * tri_gradient(mesh, t, nodal);
            wsum += w;
        }
        return g * (1.0 / wsum);
    }
    // weighted LSQ of each gradient component against (1, dx, dy)
    double A[3][3] = {{0}};
    double bx[3] = {0}, by[3] = {0};
    for (int t : patch) {
        const auto& tr = mesh.tris[t];
        Vec2 c = (mesh.nodes[tr.v[0]] + mesh.nodes[tr.v[1]] + mesh.nodes[tr.v[2]]) * (1.0 / 3.0);
        Vec2 d = c - origin;
        Vec2 g = tri_gradient(mesh, int(t), nodal);
        double w = mesh.tri_area(t);
        double row[3] = {1.0, d.x, d.y};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += w * row[i] * row[j];
            bx[i] += w * row[i] * g.x;
            by[i] += w * row[i] * g.y;
        }
    }
    // solve the two 3x3 systems by Cramer
    auto det3 = [](double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double D = det3(A);
    if (std::abs(D) < 1e-300) {
        Vec2 g{0, 0};
        double wsum = 0.0;
        for (int t : patch) {
            double w = mesh.tri_area(t);
            g = g + w * tri_gradient(mesh, t, nodal);
            wsum += w;
        }
        return g * (1.0 / wsum);
    }
    auto solve0 = [&](double b[3]) {
        double M[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        for (int i = 0; i < 3; ++i) M[i][0] = b[i];
        return det3(M) / D;
    };
    return {solve0(bx), solve0(by)};
}

FemSolution solve_fem(const Mesh& mesh, const AssemblyInput& in) {
    const int n = mesh.n_nodes();
    std::vector<std::vector<int>> adj(n);
    for (const auto& tr : mesh.tris)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (tr.v[a] != tr.v[b]) adj[tr.v[b]].push_back(tr.v[a]);

    SkylineMatrix A(adj);
    std::vector<double> rhs(n, 0.0);

    auto is_dirichlet = [&](int i) {
        return (mesh.node_tags[i] & (TAG_GAMMA1 | TAG_GAMMA2)) != 0;
    };
    auto dirichlet_value = [&](int i) {
        Vec2 p = mesh.nodes[i];
        if (mesh.node_tags[i] & TAG_GAMMA2) {
            // corner nodes carry both tags; the two data sets agree there
            return in.dirichlet2(p);
        }
        return in.dirichlet1(p);
    };

    // element loop
    for (size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tr = mesh.tris[t];
        ElementCoeff ec = in.coeff(mesh, int(t));
        Vec2 P[3] = {mesh.nodes[tr.v[0]], mesh.nodes[tr.v[1]], mesh.nodes[tr.v[2]]};
        double det = (P[1] - P[0]).cross(P[2] - P[0]);
        double area = 0.5 * std::abs(det);
        Vec2 grad[3] = {{(P[1].y - P[2].y) / det, (P[2].x - P[1].x) / det},
                        {(P[2].y - P[0].y) / det, (P[0].x - P[2].x) / det},
                        {(P[0].y - P[1].y) / det, (P[1].x - P[0].x) / det}};
        double Ke[3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                Ke[a][b] = ec.cond * area * grad[a].dot(ec.K.apply(grad[b]));

        // volumetric load: - sum_i k_i int f_i v  (one-point quadrature at centroid
        // is upgraded to 3-point midpoint rule for P1 accuracy)
        double fe[3] = {0, 0, 0};
        for (int e = 0; e < 3; ++e) {
            Vec2 mid = 0.5 * (P[e] + P[(e + 1) % 3]);
            double fv = in.volumetric ? in.volumetric(mid, tr.region) : 0.0;
            // midpoint rule: each edge midpoint couples the two adjacent vertices
            fe[e] += -ec.cond * fv * area / 3.0 * 0.5;
            fe[(e + 1) % 3] += -ec.cond * fv * area / 3.0 * 0.5;
        }

        // region-1 elements see u + jump_value at interface nodes: the known
        // jump contribution moves to the right-hand side
        double known[3] = {0, 0, 0};
        bool free_node[3];
        for (int b = 0; b < 3; ++b) {
            int ib = tr.v[b];
            free_node[b] = !is_dirichlet(ib);
            if (tr.region == 1 && in.jump_value && (mesh.node_tags[ib] & TAG_GAMMA))
                known[b] += in.jump_value(P[b]);
            if (!free_node[b]) known[b] += dirichlet_value(ib);
        }

        for (int a = 0; a < 3; ++a) {
            int ia = tr.v[a];
            if (!free_node[a]) continue;
            rhs[ia] += fe[a];
            for (int b = 0; b < 3; ++b) {
                int ib = tr.v[b];
                if (known[b] != 0.0) rhs[ia] -= Ke[a][b] * known[b];
                if (free_node[b] && ib >= ia) A.add(ia, ib, Ke[a][b]);
            }
        }
    }

    // interface flux jump: - int_Gamma phi2 v
    if (in.jump_flux) {
        for (const auto& be : mesh.bedges) {
            if (be.tag != TAG_GAMMA) continue;
            Vec2 Pa = mesh.nodes[be.a], Pb = mesh.nodes[be.b];
            double len = (Pb - Pa).norm();
            double fa = in.jump_flux(Pa), fb = in.jump_flux(Pb);
            if (!is_dirichlet(be.a)) rhs[be.a] += -len * (2.0 * fa + fb) / 6.0;
            if (!is_dirichlet(be.b)) rhs[be.b] += -len * (fa + 2.0 * fb) / 6.0;
        }
    }

    // Dirichlet rows
    for (int i = 0; i < n; ++i) {
        if (is_dirichlet(i)) {
            A.set_identity_row(i);
            rhs[i] = dirichlet_value(i);
        }
    }

    A.factorize();
    FemSolution sol;
    sol.u = A.solve(std::move(rhs));
    sol.mesh = &mesh;
    sol.u1 = sol.u;
    if (in.jump_value) {
        for (int id : mesh.interface_nodes) sol.u1[id] += in.jump_value(mesh.nodes[id]);
    }
    return sol;
}

} // namespace muskat
