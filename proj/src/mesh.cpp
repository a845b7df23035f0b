#include "skf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "skf/errors.hpp"
#include "skf/quadrature.hpp"
#include "skf/weierstrass.hpp"

namespace skf {

void GridSpec::validate() const {
    if (radial_levels < 8 || angular_levels < 8) throw InvalidArgument("grid needs at least 8 levels per direction");
    if (!(end_cutoff > 0.0 && end_cutoff < 0.2)) throw InvalidArgument("end cutoff must lie in (0, 0.2)");
    if (branch_refinement < 0) throw InvalidArgument("branch refinement must be non-negative");
    if (!(radial_extent > 2.0)) throw InvalidArgument("radial extent must exceed 2");
}

double SurfaceMesh::diameter() const {
    if (vertices.empty()) return 0.0;
    Vec3 lo = vertices[0], hi = vertices[0];
    for (const auto& v : vertices)
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    return std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                     (hi[2] - lo[2]) * (hi[2] - lo[2]));
}

namespace {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// Level set built from exact values (kept), geometric clusters around them
// and a uniform background (dropped where it would crowd the other two).
struct Levels {
    std::vector<std::pair<double, int>> pts;  // value, priority 2 exact / 1 cluster / 0 uniform
    void add(double v, int p) { pts.push_back({v, p}); }
    std::vector<double> build(double background_spacing) {
        std::sort(pts.begin(), pts.end());
        std::vector<double> strong;
        for (const auto& p : pts)
            if (p.second > 0) strong.push_back(p.first);
        std::vector<double> out;
        for (const auto& p : pts) {
            if (p.second == 0) {
                const auto it = std::lower_bound(strong.begin(), strong.end(), p.first);
                double gap = std::numeric_limits<double>::infinity();
                if (it != strong.end()) gap = std::min(gap, *it - p.first);
                if (it != strong.begin()) gap = std::min(gap, p.first - *(it - 1));
                if (gap < 0.5 * background_spacing) continue;
            }
            if (!out.empty() && p.first - out.back() < 1e-9) {
                continue;  // exact values sort first among ties only by value; keep the earlier one
            }
            out.push_back(p.first);
        }
        return out;
    }
};

void add_cluster(Levels& lv, double centre, double first, double last, int count, double lo, double hi) {
    if (count <= 0 || !(last > first)) return;
    const double q = count > 1 ? std::pow(last / first, 1.0 / (count - 1)) : 1.0;
    double dlt = first;
    for (int k = 0; k < count; ++k, dlt *= q) {
        if (centre - dlt > lo) lv.add(centre - dlt, 1);
        if (centre + dlt < hi) lv.add(centre + dlt, 1);
    }
}

int index_of(const std::vector<double>& v, double x) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - x) < 1e-12) return static_cast<int>(i);
    throw InvalidArgument("grid level missing");
}

const QuadratureSpec edge_spec{1e-12, 1e-14, 200};

}  // namespace

Patch integrate_patch(const ModuliPoint& m, const DerivedModuli& d, const GridSpec& grid) {
    grid.validate();
    const double lrho = std::log(m.rho);
    if (lrho < 0.05) throw InvalidArgument("meshing needs rho >= 1.05 so the unit-circle and end seams separate");
    if (!(m.beta > 0.0 && m.beta < pi)) throw BetaDegenerate("meshing needs beta in (0, pi)");

    // Radial levels in log|z|.
    const double core_lo = -1.0, core_hi = lrho + 1.0;
    const double hr = (core_hi - core_lo) / (grid.radial_levels - 1);
    Levels rl;
    for (int i = 0; i < grid.radial_levels; ++i) rl.add(core_lo + i * hr, 0);
    rl.add(0.0, 2);
    rl.add(lrho, 2);
    const double reach = std::min(0.45 * lrho, hr);
    add_cluster(rl, lrho, 1.2 * grid.end_cutoff, reach, grid.branch_refinement + 2, 0.0, core_hi);
    add_cluster(rl, 0.0, reach / 8.0, reach, grid.branch_refinement, core_lo, lrho);
    const double far_hi = lrho + std::log(grid.radial_extent), far_lo = -std::log(grid.radial_extent);
    for (double x = core_hi, h = hr * 1.5; x < far_hi; h *= 1.5) {
        x = std::min(x + h, far_hi);
        rl.add(x, 2);
    }
    for (double x = core_lo, h = hr * 1.5; x > far_lo; h *= 1.5) {
        x = std::max(x - h, far_lo);
        rl.add(x, 2);
    }
    const std::vector<double> L = rl.build(hr);

    // Angular levels on [0, pi].
    const double ha = pi / (grid.angular_levels - 1);
    Levels al;
    for (int j = 0; j < grid.angular_levels; ++j) al.add(j * ha, 0);
    al.add(0.0, 2);
    al.add(pi, 2);
    al.add(m.alpha, 2);
    al.add(m.beta, 2);
    const double areach = std::min({ha, 0.45 * m.beta, 0.45 * (pi - m.beta)});
    add_cluster(al, m.beta, 1.2 * grid.end_cutoff, areach, grid.branch_refinement + 2, 0.0, pi);
    add_cluster(al, m.alpha, areach / 8.0, std::min({ha, 0.45 * m.alpha, 0.45 * (pi - m.alpha)}),
                grid.branch_refinement, 0.0, pi);
    const std::vector<double> T = al.build(ha);

    Patch P;
    P.radii.resize(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) P.radii[i] = std::exp(L[i]);
    P.angles = T;
    const int NR = static_cast<int>(L.size()), NA = static_cast<int>(T.size());
    P.cut_row = index_of(L, 0.0);
    P.end_row = index_of(L, lrho);
    const int alpha_col = index_of(T, m.alpha), beta_col = index_of(T, m.beta);

    std::vector<int> in_id(NR * NA, -1), out_id(NR * NA, -1);
    auto at = [NA](int i, int j) { return i * NA + j; };
    auto new_node = [&](int i, int j, Patch::Side s) {
        const int id = static_cast<int>(P.z.size());
        P.z.push_back(std::polar(P.radii[i], T[j]));
        P.u.push_back(0.0);
        P.side.push_back(s);
        P.row.push_back(i);
        P.col.push_back(j);
        return id;
    };
    for (int i = 0; i < NR; ++i)
        for (int j = 0; j < NA; ++j) {
            if (i == P.end_row && j == beta_col) continue;  // the end itself
            const bool seam = (i == P.cut_row && j > alpha_col) || (i == P.end_row && j > beta_col);
            if (seam) {
                in_id[at(i, j)] = new_node(i, j, Patch::Side::inner);
                out_id[at(i, j)] = new_node(i, j, Patch::Side::outer);
            } else {
                in_id[at(i, j)] = out_id[at(i, j)] = new_node(i, j, Patch::Side::single);
            }
        }
    const int N = static_cast<int>(P.z.size());
    P.root = in_id[at(P.cut_row, 0)];
    P.branch_node = in_id[at(P.cut_row, alpha_col)];

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < NR; ++i)
        for (int j = 0; j < NA; ++j) {
            if (i + 1 < NR) {
                const int a = out_id[at(i, j)], b = in_id[at(i + 1, j)];
                if (a >= 0 && b >= 0) edges.push_back({a, b});
            }
            if (j + 1 < NA) {
                const int a = in_id[at(i, j)], b = in_id[at(i, j + 1)];
                if (a >= 0 && b >= 0) edges.push_back({a, b});
                const int a2 = out_id[at(i, j)], b2 = out_id[at(i, j + 1)];
                if (a2 >= 0 && b2 >= 0 && (a2 != a || b2 != b)) edges.push_back({a2, b2});
            }
        }
    std::vector<std::vector<std::pair<int, int>>> adj(N);  // (neighbour, edge index)
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adj[edges[e].first].push_back({edges[e].second, static_cast<int>(e)});
        adj[edges[e].second].push_back({edges[e].first, static_cast<int>(e)});
    }

    // Branch continuation over a spanning tree rooted at z = 1; the branch
    // point (u = 0) is a leaf.
    const cplx ea = std::polar(1.0, m.alpha), eac = std::conj(ea);
    auto rad = [&](cplx z) { return radicand(z, m.alpha); };
    std::vector<int> order, parent_edge(N, -1), parent(N, -1);
    std::vector<char> seen(N, 0);
    std::queue<int> q;
    q.push(P.root);
    seen[P.root] = 1;
    P.u[P.root] = u_principal(1.0, m.alpha);
    while (!q.empty()) {
        const int a = q.front();
        q.pop();
        order.push_back(a);
        if (a == P.branch_node) continue;
        for (const auto& [b, e] : adj[a]) {
            if (seen[b]) continue;
            seen[b] = 1;
            parent[b] = a;
            parent_edge[b] = e;
            P.u[b] = b == P.branch_node ? cplx(0.0) : P.u[a] * std::sqrt(rad(P.z[b]) / rad(P.z[a]));
            q.push(b);
        }
    }
    if (static_cast<int>(order.size()) != N) throw BranchAmbiguity("grid graph is disconnected");

    // Edge increments of Re(phi1, phi2, phi3).
    auto increment = [&](int a, int b) -> Vec3 {
        bool flip = false;
        if (a == P.branch_node) {
            std::swap(a, b);
            flip = true;
        }
        const double la = L[P.row[a]], lb = L[P.row[b]], ta = T[P.col[a]], tb = T[P.col[b]];
        const bool radial = P.col[a] == P.col[b];
        const cplx ra = rad(P.z[a]), ua = P.u[a];
        if (b != P.branch_node) {
            const cplx ub = ua * std::sqrt(rad(P.z[b]) / ra);
            if (std::abs(ub - P.u[b]) > 1e-7 * std::abs(P.u[b]))
                throw BranchAmbiguity("square-root branch disagrees across a grid edge");
        }
        auto point = [&](double p, double sweight, cplx& z, cplx& u, cplx& dz) {
            if (b == P.branch_node) {
                const double s2 = sweight * sweight;  // p = 1 - s^2
                cplx gap;                             // z - e^{i alpha}, formed without cancellation
                if (radial) {
                    z = ea * std::exp((la - lb) * s2);
                    gap = ea * std::expm1((la - lb) * s2);
                } else {
                    const double ph = (ta - tb) * s2;
                    z = std::polar(1.0, tb + ph);
                    const double sh = std::sin(0.5 * ph);
                    gap = ea * cplx(-2.0 * sh * sh, std::sin(ph));
                }
                u = ua * std::sqrt(gap * (z - eac) / z / ra);
            } else {
                z = std::polar(std::exp(la + p * (lb - la)), ta + p * (tb - ta));
                u = ua * std::sqrt(rad(z) / ra);
            }
            dz = radial ? z * (lb - la) : cplx(0.0, 1.0) * z * (tb - ta);
        };
        const bool sing = b == P.branch_node;
        auto f12 = [&](double x) {
            cplx z, u, dz;
            point(sing ? 1.0 - x * x : x, x, z, u, dz);
            const FormValue F = phi_forms_unchecked(z, u, m, d);
            const double w = sing ? 2.0 * x : 1.0;
            return cplx((F.phi1 * dz).real(), (F.phi2 * dz).real()) * w;
        };
        auto f3 = [&](double x) {
            cplx z, u, dz;
            point(sing ? 1.0 - x * x : x, x, z, u, dz);
            const FormValue F = phi_forms_unchecked(z, u, m, d);
            const double w = sing ? 2.0 * x : 1.0;
            return (F.phi3 * dz).real() * w;
        };
        // With p = 1 - x^2 the branch end sits at x = 0; dp = 2x dx over the flipped limits.
        const CQuadResult r12 = integrate_adaptive_complex(f12, 0.0, 1.0, edge_spec);
        const QuadResult r3 = integrate_adaptive(f3, 0.0, 1.0, edge_spec);
        Vec3 v{r12.value.real(), r12.value.imag(), r3.value};
        if (flip) v = {-v[0], -v[1], -v[2]};
        return v;
    };

    std::vector<Vec3> inc(edges.size());
    const int E = static_cast<int>(edges.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (int e = 0; e < E; ++e) inc[e] = increment(edges[e].first, edges[e].second);

    auto& X = P.mesh.vertices;
    X.assign(N, Vec3{0.0, 0.0, 0.0});
    for (int a : order) {
        if (a == P.root) continue;
        const int e = parent_edge[a];
        X[a] = edges[e].first == parent[a] ? X[parent[a]] + inc[e] : X[parent[a]] - inc[e];
    }
    for (int e = 0; e < E; ++e) {
        const auto [a, b] = edges[e];
        P.path_discrepancy = std::max(P.path_discrepancy, norm(X[b] - X[a] - inc[e]));
    }

    // Faces and tags.
    P.mesh.tags.assign(N, VertexTag::interior);
    for (int v = 0; v < N; ++v) {
        if (P.col[v] == 0 || P.col[v] == NA - 1) P.mesh.tags[v] = VertexTag::symmetry_line;
        if (P.row[v] == 0 || P.row[v] == NR - 1) P.mesh.tags[v] = VertexTag::end_boundary;
    }
    for (int i = 0; i + 1 < NR; ++i)
        for (int j = 0; j + 1 < NA; ++j) {
            const int a = out_id[at(i, j)], b = out_id[at(i, j + 1)];
            const int c = in_id[at(i + 1, j + 1)], dd = in_id[at(i + 1, j)];
            if (a < 0 || b < 0 || c < 0 || dd < 0) {
                for (int v : {a, b, c, dd})
                    if (v >= 0) P.mesh.tags[v] = VertexTag::end_boundary;
                continue;
            }
            P.mesh.faces.push_back({a, dd, c});
            P.mesh.faces.push_back({a, c, b});
        }
    return P;
}

ClosureGaps closure_gaps(const ModuliPoint& m, const DerivedModuli& d) {
    const double a = m.alpha;
    // Arc z = e^{it} from the branch point towards +-1; t = branch +- s^2 keeps
    // the vanishing radicand exact.
    auto arc = [&](bool through_one, double sgn_dir) {
        auto f = [&](double s) {
            const double s2 = s * s;
            double t, gap;
            cplx u;
            if (through_one) {
                t = sgn_dir * (a - s2);
                gap = 2.0 * std::sin(a - 0.5 * s2) * std::sin(0.5 * s2);  // cos t - cos a
                u = std::sqrt(2.0 * gap);
            } else {
                t = sgn_dir * (a + s2);
                gap = 2.0 * std::sin(a + 0.5 * s2) * std::sin(0.5 * s2);  // cos a - cos t
                u = cplx(0.0, std::sqrt(2.0 * gap));
            }
            const cplx z = std::polar(1.0, t);
            const FormValue F = phi_forms_unchecked(z, u, m, d);
            const cplx dz = cplx(0.0, 1.0) * z;
            // dt/ds = -2 s sgn (through one) or +2 s sgn (through minus one)
            const double w = (through_one ? -2.0 : 2.0) * s * sgn_dir;
            return cplx((F.phi1 * dz).real(), (F.phi2 * dz).real()) * w;
        };
        const double len = through_one ? std::sqrt(a) : std::sqrt(pi - a);
        return integrate_adaptive_complex(f, 0.0, len, edge_spec).value;
    };
    // arc(true, +1) = -int_0^a, arc(true, -1) = int_{-a}^0 (in t); likewise
    // arc(false, +1) = int_a^pi and arc(false, -1) = -int_{-pi}^{-a}.
    const cplx p1 = arc(true, -1.0) - arc(true, 1.0);
    // Through -1: from e^{i a} to e^{i(2 pi - a)} = e^{-i a}.
    const cplx p2 = arc(false, 1.0) - arc(false, -1.0);
    ClosureGaps g;
    // Returning on the other sheet doubles the (odd in u) horizontal components.
    g.period1 = {2.0 * p1.real(), 2.0 * p1.imag(), 0.0};
    g.period2 = {2.0 * p2.real(), 2.0 * p2.imag(), 0.0};
    g.gap_x1 = norm(g.period1);
    g.gap_x2 = norm(g.period2);
    return g;
}

LatticeVectors lattice_vectors(const ModuliPoint& m, const DerivedModuli& d) {
    const double sb = std::sin(m.beta);
    if (!(sb > 1e-12)) throw BetaDegenerate("lattice widths need sin(beta) > 0");
    LatticeVectors lv;
    lv.w_x1 = 2.0 * pi * std::sin(d.omega) / sb;
    lv.w_x2 = 2.0 * pi * std::cos(d.omega) / sb;
    lv.v1 = {lv.w_x1, 0.0, 0.0};
    lv.v2 = {0.0, lv.w_x2, 0.0};
    return lv;
}

namespace {

struct Piece {
    int transform;  // 0 identity, 1 real-axis half-turn, 2 sheet involution, 3 composite
    Vec3 shift;
};

Vec3 apply(int transform, const Vec3& x, const Vec3& xb) {
    switch (transform) {
        case 1: return {-x[0], x[1], -x[2]};
        case 2: return {2 * xb[0] - x[0], 2 * xb[1] - x[1], x[2]};
        case 3: return {2 * xb[0] + x[0], 2 * xb[1] - x[1], -x[2]};
        default: return x;
    }
}

}  // namespace

SurfaceBuild build_surface(const ModuliPoint& m, const DerivedModuli& d, int n1, int n2, const GridSpec& grid) {
    if (n1 < 1 || n2 < 1) throw InvalidArgument("copies must be positive");
    const Patch P = integrate_patch(m, d, grid);
    const SurfaceMesh& F = P.mesh;
    SurfaceBuild out;
    out.lattice = lattice_vectors(m, d);
    out.gaps = closure_gaps(m, d);
    out.patch_diameter = F.diameter();
    out.path_discrepancy = P.path_discrepancy;
    const Vec3 xb = F.vertices[P.branch_node];

    // Tiling check: the translation across the end seam is half a lattice diagonal.
    Vec3 jump{0, 0, 0};
    std::vector<std::pair<int, int>> seam_pairs;
    for (std::size_t v = 0; v < P.z.size(); ++v)
        if (P.side[v] == Patch::Side::outer && P.row[v] == P.end_row)
            for (std::size_t w = 0; w < P.z.size(); ++w)
                if (P.side[w] == Patch::Side::inner && P.row[w] == P.end_row && P.col[w] == P.col[v])
                    seam_pairs.push_back({static_cast<int>(v), static_cast<int>(w)});
    if (seam_pairs.empty()) throw InvalidArgument("end seam has no grid nodes");
    for (const auto& [o, i] : seam_pairs) jump = jump + (F.vertices[o] - F.vertices[i]);
    for (auto& c : jump) c /= static_cast<double>(seam_pairs.size());
    out.jump_m = static_cast<int>(std::lround(2.0 * jump[0] / out.lattice.w_x1));
    out.jump_n = static_cast<int>(std::lround(2.0 * jump[1] / out.lattice.w_x2));
    out.end_jump = {0.5 * out.jump_m * out.lattice.w_x1, 0.5 * out.jump_n * out.lattice.w_x2, 0.0};
    for (const auto& [o, i] : seam_pairs)
        out.jump_error = std::max(out.jump_error, norm(F.vertices[o] - F.vertices[i] - out.end_jump));

    // One rectangular cell: four symmetry images and their end-seam translates.
    std::vector<Piece> cell;
    for (const Vec3& t : {Vec3{0, 0, 0}, out.end_jump})
        for (int g = 0; g < 4; ++g) cell.push_back({g, t});

    auto piece_vertices = [&](const Piece& pc, const Vec3& shift) {
        std::vector<Vec3> vs(F.vertices.size());
        for (std::size_t v = 0; v < vs.size(); ++v) vs[v] = apply(pc.transform, F.vertices[v], xb) + pc.shift + shift;
        return vs;
    };

    // Abutment: every glued boundary vertex of the identity piece must have a
    // partner in another copy of a 3 x 3 block of cells.
    std::vector<int> glued;
    for (std::size_t v = 0; v < P.z.size(); ++v)
        if (P.side[v] != Patch::Side::single || F.tags[v] == VertexTag::symmetry_line) glued.push_back(static_cast<int>(v));
    std::vector<double> best(glued.size(), std::numeric_limits<double>::infinity());
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (std::size_t c = 0; c < cell.size(); ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const Vec3 shift{a * out.lattice.w_x1, b * out.lattice.w_x2, 0.0};
                const auto vs = piece_vertices(cell[c], shift);
                for (std::size_t k = 0; k < glued.size(); ++k) {
                    const Vec3& x = F.vertices[glued[k]];
                    for (const auto& y : vs) {
                        const double dx = std::abs(x[0] - y[0]);
                        if (dx > best[k]) continue;
                        best[k] = std::min(best[k], norm(x - y));
                    }
                }
            }
    for (double b : best) out.abut_mismatch = std::max(out.abut_mismatch, b);

    // Tiled surface with coincident vertices welded.
    SurfaceMesh& S = out.mesh;
    const double tol = 1e-7 * std::max(out.patch_diameter, 1e-300);
    std::unordered_map<long long, std::vector<int>> buckets;
    auto key = [tol](const Vec3& x, int dx, int dy, int dz) {
        const long long i = static_cast<long long>(std::floor(x[0] / tol)) + dx;
        const long long j = static_cast<long long>(std::floor(x[1] / tol)) + dy;
        const long long k = static_cast<long long>(std::floor(x[2] / tol)) + dz;
        return (i * 73856093LL) ^ (j * 19349663LL) ^ (k * 83492791LL);
    };
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            for (const Piece& pc : cell) {
                const Vec3 shift{a * out.lattice.w_x1, b * out.lattice.w_x2, 0.0};
                const auto vs = piece_vertices(pc, shift);
                std::vector<int> map(vs.size());
                for (std::size_t v = 0; v < vs.size(); ++v) {
                    int found = -1;
                    for (int dx = -1; dx <= 1 && found < 0; ++dx)
                        for (int dy = -1; dy <= 1 && found < 0; ++dy)
                            for (int dz = -1; dz <= 1 && found < 0; ++dz) {
                                const auto it = buckets.find(key(vs[v], dx, dy, dz));
                                if (it == buckets.end()) continue;
                                for (int w : it->second)
                                    if (norm(S.vertices[w] - vs[v]) < tol) {
                                        found = w;
                                        break;
                                    }
                            }
                    if (found >= 0) {
                        map[v] = found;
                        ++out.welded;
                        continue;
                    }
                    map[v] = static_cast<int>(S.vertices.size());
                    S.vertices.push_back(vs[v]);
                    S.tags.push_back(F.tags[v]);
                    buckets[key(vs[v], 0, 0, 0)].push_back(map[v]);
                }
                const bool reverse = pc.transform == 1 || pc.transform == 3;
                for (const auto& f : F.faces) {
                    std::array<int, 3> g{map[f[0]], map[f[1]], map[f[2]]};
                    if (reverse) std::swap(g[1], g[2]);
                    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
                    S.faces.push_back(g);
                }
            }
    out.solved = std::max(out.gaps.gap_x1, out.gaps.gap_x2) < 1e-6 * out.patch_diameter;
    return out;
}

void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    char buf[128];
    if (format == MeshFormat::obj) {
        os << "# skfamily surface mesh\n";
        for (const auto& v : mesh.vertices) {
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
            os << buf;
        }
        for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    } else {
        os << "ply\nformat ascii 1.0\ncomment skfamily surface mesh; tag 0 interior, 1 symmetry line, 2 end boundary\n"
           << "element vertex " << mesh.vertices.size() << "\nproperty double x\nproperty double y\nproperty double z\n"
           << "property uchar tag\nelement face " << mesh.faces.size()
           << "\nproperty list uchar int vertex_indices\nend_header\n";
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
            const auto& v = mesh.vertices[i];
            const int tag = i < mesh.tags.size() ? static_cast<int>(mesh.tags[i]) : 0;
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %d\n", v[0], v[1], v[2], tag);
            os << buf;
        }
        for (const auto& f : mesh.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
    if (!os) throw IoError("write failed for " + path);
}

namespace {

[[noreturn]] void bad(const std::string& path, std::size_t line, const std::string& why) {
    throw IoError(path + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

SurfaceMesh read_mesh(MeshFormat format, const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    SurfaceMesh mesh;
    std::string line;
    std::size_t ln = 0;
    if (format == MeshFormat::obj) {
        std::vector<std::array<int, 3>> faces;
        while (std::getline(is, line)) {
            ++ln;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            std::string rec;
            ss >> rec;
            if (rec == "v") {
                Vec3 v;
                if (!(ss >> v[0] >> v[1] >> v[2])) bad(path, ln, "malformed vertex");
                mesh.vertices.push_back(v);
                mesh.tags.push_back(VertexTag::interior);
            } else if (rec == "f") {
                std::array<int, 3> f;
                if (!(ss >> f[0] >> f[1] >> f[2])) bad(path, ln, "malformed face");
                for (int& k : f) {
                    if (k < 1 || k > static_cast<int>(mesh.vertices.size())) bad(path, ln, "face index out of range");
                    --k;
                }
                faces.push_back(f);
            } else {
                bad(path, ln, "unsupported record '" + rec + "'");
            }
            std::string rest;
            if (ss >> rest) bad(path, ln, "trailing data");
        }
        mesh.faces = std::move(faces);
        return mesh;
    }
    auto next = [&](const std::string& expect) {
        if (!std::getline(is, line)) bad(path, ln, "unexpected end of header");
        ++ln;
        if (line.rfind(expect, 0) != 0) bad(path, ln, "expected '" + expect + "'");
    };
    next("ply");
    next("format ascii 1.0");
    std::size_t nv = 0, nf = 0;
    for (;;) {
        if (!std::getline(is, line)) bad(path, ln, "missing end_header");
        ++ln;
        if (line == "end_header") break;
        if (line.rfind("comment", 0) == 0) continue;
        std::istringstream ss(line);
        std::string w1, w2;
        ss >> w1 >> w2;
        if (w1 == "element" && w2 == "vertex") ss >> nv;
        else if (w1 == "element" && w2 == "face") ss >> nf;
        else if (w1 != "property") bad(path, ln, "unknown header line");
    }
    for (std::size_t i = 0; i < nv; ++i) {
        if (!std::getline(is, line)) bad(path, ln, "missing vertex");
        ++ln;
        std::istringstream ss(line);
        Vec3 v;
        int tag;
        if (!(ss >> v[0] >> v[1] >> v[2] >> tag) || tag < 0 || tag > 2) bad(path, ln, "malformed vertex");
        mesh.vertices.push_back(v);
        mesh.tags.push_back(static_cast<VertexTag>(tag));
    }
    for (std::size_t i = 0; i < nf; ++i) {
        if (!std::getline(is, line)) bad(path, ln, "missing face");
        ++ln;
        std::istringstream ss(line);
        int n;
        std::array<int, 3> f;
        if (!(ss >> n >> f[0] >> f[1] >> f[2]) || n != 3) bad(path, ln, "malformed face");
        for (int k : f)
            if (k < 0 || k >= static_cast<int>(nv)) bad(path, ln, "face index out of range");
        mesh.faces.push_back(f);
    }
    return mesh;
}

}  // namespace skf
