#pragma once

#include <string>
#include <vector>

#include "muskat/geometry.hpp"

// Conforming triangulation of Omega1 (outer region, region tag 1) and Omega2
// (lens, region tag 2) sharing the interface nodes, graded toward the corner
// points.  Omega2 is meshed in columns between the axis and the interface;
// Omega1 in rays between the composite inner chain (axis / interface / axis)
// and the outer arc, with a geometric layer distribution whose first cell
// matches the local inner spacing.

namespace muskat {

enum BoundaryTag { TAG_GAMMA = 1, TAG_GAMMA1 = 2, TAG_GAMMA2 = 4 };

struct Mesh {
    std::vector<Vec2> nodes;
    struct Tri {
        int v[3];
        int region; // 1 or 2
    };
    std::vector<Tri> tris;
    struct BEdge {
        int a, b;
        int tag;
    };
    std::vector<BEdge> bedges;

    std::vector<int> node_tags;          // bitmask of BoundaryTag
    std::vector<int> interface_nodes;    // ordered A0 -> A1
    std::vector<double> interface_omega; // arc-length parameter per interface node
    int corner_a0 = -1, corner_a1 = -1;

    double h_max = 0.0;

    double tri_area(int t) const;
    int n_nodes() const { return int(nodes.size()); }
};

struct MeshControls {
    int n_interface = 192;    // interface intervals
    int n_layers_lens = 8;
    int n_layers_outer = 18;
    double grading = 3.0;     // two-sided power clustering exponent
    int n_axis_top = 12;      // inner-chain axis intervals (graded toward corners)
    int n_axis_bottom = 12;

    MeshControls refined(double factor = 2.0) const {
        MeshControls m = *this;
        m.n_interface = int(m.n_interface * factor);
        m.n_layers_lens = int(m.n_layers_lens * factor);
        m.n_layers_outer = int(m.n_layers_outer * factor);
        m.n_axis_top = int(m.n_axis_top * factor);
        m.n_axis_bottom = int(m.n_axis_bottom * factor);
        return m;
    }
};

Mesh build_mesh(const Geometry& geom, const MeshControls& controls);

// simple text format: header line, then "n  x y tags" records and
// "t  v0 v1 v2 region" records
void write_mesh_text(const Mesh& mesh, const std::string& path);

// contact angle at a corner measured from the first interface mesh edge
double mesh_contact_angle(const Mesh& mesh, int corner);

} // namespace muskat
