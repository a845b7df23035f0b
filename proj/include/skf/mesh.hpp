#pragma once
// Tessellation of the immersed surface: edge-by-edge path integration of the
// real parts of the Weierstrass forms over a polar grid of the upper half
// z-plane, completion by the symmetry images, lattice tiling and export.

#include <array>
#include <string>
#include <vector>

#include "skf/torus.hpp"

namespace skf {

struct GridSpec {
    int radial_levels = 40;        // uniform log|z| levels in the core band around the unit circle and the end
    int angular_levels = 41;       // uniform angle levels on [0, pi]
    double end_cutoff = 1e-2;      // exclusion radius around the end, relative to rho
    int branch_refinement = 4;     // geometric levels added around the branch point and the end
    double radial_extent = 1e3;    // grid spans |z| in [1/extent, rho * extent]

    void validate() const;
};

using Vec3 = std::array<double, 3>;

enum class VertexTag {
    interior,
    symmetry_line,  // image of the real axis (straight lines of the surface)
    end_boundary    // truncation boundary: end cutoff circle and the radial cutoffs
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<VertexTag> tags;

    double diameter() const;  // bounding-box diagonal
};

// Fundamental piece: the upper half-plane on one sheet, cut along the unit
// circle from the branch point to -1 and along |z| = rho from the end to the
// negative axis. Seam nodes appear twice (inner and outer side).
struct Patch {
    enum class Side { single, inner, outer };
    SurfaceMesh mesh;
    std::vector<cplx> z;
    std::vector<cplx> u;
    std::vector<Side> side;
    std::vector<int> row, col;
    std::vector<double> radii, angles;  // grid levels
    int root = -1;                      // node at z = 1, placed at the origin
    int branch_node = -1;               // node at the branch point e^{i alpha}
    int cut_row = -1, end_row = -1;     // rows of |z| = 1 and |z| = rho
    double path_discrepancy = 0.0;      // max mismatch over edges outside the spanning tree
};

// Throws InvalidArgument for rho too close to 1 for the two seams to separate.
Patch integrate_patch(const ModuliPoint& m, const DerivedModuli& d, const GridSpec& grid = {});

// Translation components of the real periods over the two generator cycles
// (the unit-circle loops through 1 and through -1 between the branch points).
// Both vanish exactly at solutions of the period problem.
struct ClosureGaps {
    double gap_x1 = 0.0, gap_x2 = 0.0;
    Vec3 period1{}, period2{};
};
ClosureGaps closure_gaps(const ModuliPoint& m, const DerivedModuli& d);

// Rectangular lattice of the straight lines, sized from the end residues.
struct LatticeVectors {
    Vec3 v1{}, v2{};
    double w_x1 = 0.0;  // 2 pi sin(omega) / sin(beta)
    double w_x2 = 0.0;  // 2 pi cos(omega) / sin(beta)
};
LatticeVectors lattice_vectors(const ModuliPoint& m, const DerivedModuli& d);

struct SurfaceBuild {
    SurfaceMesh mesh;           // welded, tiled surface
    LatticeVectors lattice;
    ClosureGaps gaps;
    Vec3 end_jump{};            // translation across the end seam of the piece
    int jump_m = 0, jump_n = 0; // end_jump = (jump_m v1 + jump_n v2) / 2, found by the tiling check
    double jump_error = 0.0;    // distance of the measured jump from that lattice point
    double abut_mismatch = 0.0; // max distance from a glued boundary vertex to its partner copy
    double patch_diameter = 0.0;
    double path_discrepancy = 0.0;
    int welded = 0;             // vertices identified across copies
    bool solved = true;         // false when closure gaps exceed 1e-6 * diameter
};

// Completes the piece with its three symmetry images (sheet involution and
// the two real-axis half-turns), adds the end-seam translate, tiles copies
// (n1 x n2 rectangular cells) and welds coincident vertices.
SurfaceBuild build_surface(const ModuliPoint& m, const DerivedModuli& d, int n1, int n2,
                           const GridSpec& grid = {});

enum class MeshFormat { obj, ply };
// ASCII OBJ (v / f records) or ASCII PLY 1.0 with an integer vertex tag property.
void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path);

// Strict reader for the two formats written above (used for round trips).
SurfaceMesh read_mesh(MeshFormat format, const std::string& path);

}  // namespace skf
