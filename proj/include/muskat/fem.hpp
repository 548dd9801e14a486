#pragma once

#include <functional>
#include <vector>

#include "muskat/mesh.hpp"

// P1 finite elements on the two-region triangulation with anisotropic
// per-element coefficient matrices, and an envelope (skyline) LDL^T direct
// solver for the resulting SPD systems.

namespace muskat {

// symmetric envelope matrix
class SkylineMatrix {
  public:
    explicit SkylineMatrix(const std::vector<std::vector<int>>& adjacency);

    void add(int i, int j, double v); // symmetric add (upper triangle stored)
    void set_identity_row(int i);     // Dirichlet row: A_ii = 1, off-diag cleared
    void factorize();                 // LDL^T in place
    std::vector<double> solve(std::vector<double> rhs) const;
    int n() const { return n_; }

  private:
    int n_ = 0;
    std::vector<int> col_start_;  // first stored row index per column
    std::vector<int> offset_;     // start of column data
    std::vector<double> data_;    // packed columns, diagonal last
    std::vector<double> diag_;
    bool factorized_ = false;
    double& at(int i, int j);     // i <= j
};

struct ElementCoeff {
    Mat2 K;       // coefficient matrix (SPD)
    double cond;  // conductivity factor (k1 or k2)
};

// transmission assembly: unknowns are the Omega2-side traces on Gamma;
// Omega1-side values there are u + jump_value.
struct AssemblyInput {
    // per-element coefficient (identity for the untransformed Laplacian)
    std::function<ElementCoeff(const Mesh&, int tri)> coeff;
    // volumetric right-hand sides: Delta W_i = f_i (0 for harmonic)
    std::function<double(Vec2, int region)> volumetric;
    // interface jumps
    std::function<double(Vec2)> jump_value; // W1 - W2 on Gamma
    std::function<double(Vec2)> jump_flux;  // k1 dn W1 - k2 dn W2 on Gamma
    // Dirichlet data per tag
    std::function<double(Vec2)> dirichlet1; // on Gamma1
    std::function<double(Vec2)> dirichlet2; // on Gamma2
    double k1 = 1.0, k2 = 1.0;
};

struct FemSolution {
    std::vector<double> u;      // nodal solution (Omega2 trace at interface)
    std::vector<double> u1;     // Omega1-side nodal values (u + jump on Gamma)
    const Mesh* mesh = nullptr;
};

FemSolution solve_fem(const Mesh& mesh, const AssemblyInput& in);

// P1 gradient of a nodal field on one triangle
Vec2 tri_gradient(const Mesh& mesh, int t, const std::vector<double>& nodal);

// one-sided gradient recovery at a node: area-weighted average of adjacent
// element gradients restricted to the given region
Vec2 recover_gradient(const Mesh& mesh, int node, int region,
                      const std::vector<double>& nodal,
                      const std::vector<std::vector<int>>& node_tris);

std::vector<std::vector<int>> node_to_tris(const Mesh& mesh);

} // namespace muskat
