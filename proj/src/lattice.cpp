#include "sm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sm {

IntegerSimplex::IntegerSimplex(IVec base, IMat edges) : p(std::move(base)), M(std::move(edges)) {
    d = static_cast<int>(p.size());
    if (static_cast<int>(M.size()) != d) throw std::invalid_argument("IntegerSimplex: M shape mismatch");
    for (const auto& row : M)
        if (static_cast<int>(row.size()) != d) throw std::invalid_argument("IntegerSimplex: M not square");
    det_ = int_det(M);
    if (det_ == 0) throw std::invalid_argument("IntegerSimplex: singular edge matrix");
    inv_m_ = rat_inverse(rat_mat(M));
}

std::vector<IVec> IntegerSimplex::vertices() const {
    std::vector<IVec> vs;
    vs.push_back(p);
    for (int j = 0; j < d; ++j) {
        IVec v = p;
        for (int i = 0; i < d; ++i) v[i] += M[i][j];
        vs.push_back(std::move(v));
    }
    return vs;
}

SimplicialComplex::SimplicialComplex(std::vector<IntegerSimplex> s) : simplices(std::move(s)) {
    if (simplices.empty()) throw std::invalid_argument("SimplicialComplex: empty");
    d = simplices[0].d;
    for (const auto& sx : simplices)
        if (sx.d != d) throw std::invalid_argument("SimplicialComplex: mixed dimensions");
}

SimplicialComplex SimplicialComplex::single(IntegerSimplex s) {
    return SimplicialComplex(std::vector<IntegerSimplex>{std::move(s)});
}

double SimplicialComplex::volume() const {
    double fact = 1.0;
    for (int k = 2; k <= d; ++k) fact *= k;
    double v = 0.0;
    for (const auto& s : simplices) v += static_cast<double>(s.abs_det()) / fact;
    return v;
}

FaceClass classify_point(const IntegerSimplex& s, const RatVec& x, const Rat& tau) {
    // Barycentric coordinates of x in tau*(p + M S_d):
    // x = tau*p + tau*M*lam, lam_0 = 1 - sum lam.
    RatVec shifted(s.d);
    for (int i = 0; i < s.d; ++i) shifted[i] = x[i] - tau * rat_of(s.p[i]);
    RatVec lam = rat_mat_vec(s.inverse_m(), shifted);
    Rat lam0 = tau;
    for (auto& l : lam) lam0 -= l;

    FaceClass fc;
    fc.inside = lam0 >= 0;
    for (const auto& l : lam) fc.inside = fc.inside && l >= 0;
    if (!fc.inside) return fc;
    if (lam0 == 0) fc.zeros.push_back(0);
    for (int i = 0; i < s.d; ++i)
        if (lam[i] == 0) fc.zeros.push_back(i + 1);
    return fc;
}

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

std::vector<double> edge_dir(const IVec& from, const IVec& to) {
    std::vector<double> e(from.size());
    for (size_t i = 0; i < from.size(); ++i) e[i] = static_cast<double>(to[i] - from[i]);
    return e;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> cross(const std::vector<double>& a, const std::vector<double>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Interior angle at vertex v of a triangle, divided by 2*pi.
double vertex_angle_2d(const IVec& v, const IVec& a, const IVec& b) {
    auto u = edge_dir(v, a), w = edge_dir(v, b);
    double crossz = u[0] * w[1] - u[1] * w[0];
    double angle = std::atan2(std::abs(crossz), dot(u, w));
    return angle / (2.0 * M_PI);
}

// Van Oosterom-Strackee: solid angle of the cone at vertex v of a
// tetrahedron, divided by 4*pi.
double vertex_angle_3d(const IVec& v, const IVec& a, const IVec& b, const IVec& c) {
    auto ra = edge_dir(v, a), rb = edge_dir(v, b), rc = edge_dir(v, c);
    double la = norm(ra), lb = norm(rb), lc = norm(rc);
    double numer = std::abs(dot(ra, cross(rb, rc)));
    double denom = la * lb * lc + dot(ra, rb) * lc + dot(ra, rc) * lb + dot(rb, rc) * la;
    double omega = 2.0 * std::atan2(numer, denom);
    if (omega < 0) omega += 4.0 * M_PI;
    return omega / (4.0 * M_PI);
}

// Dihedral angle along edge (a,b) of the tetrahedron with remaining
// vertices c, d, divided by 2*pi.
double edge_angle_3d(const IVec& a, const IVec& b, const IVec& c, const IVec& d) {
    auto e = edge_dir(a, b), u = edge_dir(a, c), w = edge_dir(a, d);
    double ee = dot(e, e);
    std::vector<double> up(3), wp(3);
    for (int i = 0; i < 3; ++i) {
        up[i] = u[i] - dot(u, e) / ee * e[i];
        wp[i] = w[i] - dot(w, e) / ee * e[i];
    }
    double angle = std::atan2(norm(cross(up, wp)), dot(up, wp));
    return angle / (2.0 * M_PI);
}

// Exact classification resolved into an angle fraction; the angles only
// depend on the cone, so the undilated vertices are used.
double exact_simplex_angle(const IntegerSimplex& s, const FaceClass& fc) {
    if (!fc.inside) return 0.0;
    size_t zeros = fc.zeros.size();
    if (zeros == 0) return 1.0;
    if (s.d == 1) return 0.5;
    auto verts = s.vertices();
    if (s.d == 2) {
        if (zeros == 1) return 0.5;  // edge interior
        // Two vanishing barycentrics: the point is the remaining vertex.
        std::vector<int> pos;
        for (int i = 0; i <= 2; ++i)
            if (std::find(fc.zeros.begin(), fc.zeros.end(), i) == fc.zeros.end()) pos.push_back(i);
        int v = pos[0];
        int a = fc.zeros[0], b = fc.zeros[1];
        return vertex_angle_2d(verts[v], verts[a], verts[b]);
    }
    if (s.d == 3) {
        if (zeros == 1) return 0.5;  // facet interior
        std::vector<int> pos;
        for (int i = 0; i <= 3; ++i)
            if (std::find(fc.zeros.begin(), fc.zeros.end(), i) == fc.zeros.end()) pos.push_back(i);
        if (zeros == 2)
            return edge_angle_3d(verts[pos[0]], verts[pos[1]], verts[fc.zeros[0]], verts[fc.zeros[1]]);
        return vertex_angle_3d(verts[pos[0]], verts[fc.zeros[0]], verts[fc.zeros[1]],
                               verts[fc.zeros[2]]);
    }
    throw std::invalid_argument("solid_angle: ExactLowDim requires d <= 3");
}

bool point_in_complex(const SimplicialComplex& P, const RatVec& x, const Rat& tau) {
    for (const auto& s : P.simplices)
        if (classify_point(s, x, tau).inside) return true;
    return false;
}

// splitmix64; stable across platforms unlike <random> distributions.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

std::vector<double> random_direction(SplitMix64& rng, int d) {
    // Box-Muller pairs, then normalize.
    std::vector<double> u(d);
    for (int i = 0; i < d; i += 2) {
        double a = rng.uniform(), b = rng.uniform();
        if (a < 1e-300) a = 1e-300;
        double r = std::sqrt(-2.0 * std::log(a));
        u[i] = r * std::cos(2.0 * M_PI * b);
        if (i + 1 < d) u[i + 1] = r * std::sin(2.0 * M_PI * b);
    }
    double n = norm(u);
    if (n == 0.0) return random_direction(rng, d);
    for (double& c : u) c /= n;
    return u;
}

double mc_solid_angle(const SimplicialComplex& P, const RatVec& x, const Rat& tau,
                      const SolidAngleMethod& method) {
    long long max_coord = 1;
    for (const auto& s : P.simplices)
        for (const auto& v : s.vertices())
            for (long long c : v) max_coord = std::max(max_coord, std::llabs(c));
    Rat eps = Rat(1) / (4 * rat_of(max_coord) * tau);
    SplitMix64 rng{method.seed};
    long long hits = 0;
    for (long long i = 0; i < method.samples; ++i) {
        auto u = random_direction(rng, P.d);
        RatVec probe(P.d);
        for (int k = 0; k < P.d; ++k) probe[k] = x[k] - eps * rat_from_double(u[k]);
        if (point_in_complex(P, probe, tau)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(method.samples);
}

}  // namespace

double solid_angle(const SimplicialComplex& P, const RatVec& x, const Rat& tau,
                   const SolidAngleMethod& method) {
    if (method.kind == SolidAngleMethod::Kind::MonteCarlo) return mc_solid_angle(P, x, tau, method);
    if (P.d > 3) throw std::invalid_argument("solid_angle: ExactLowDim requires d <= 3 (use MC)");
    double total = 0.0;
    for (const auto& s : P.simplices) total += exact_simplex_angle(s, classify_point(s, x, tau));
    return total;
}

double solid_angle(const SimplicialComplex& P, const std::vector<double>& x,
                   const SolidAngleMethod& method) {
    return solid_angle(P, rat_vec(x), Rat(1), method);
}

namespace {

struct LatticeBox {
    IVec lo, hi;  // inclusive
    long long size() const {
        long long n = 1;
        for (size_t i = 0; i < lo.size(); ++i) n *= hi[i] - lo[i] + 1;
        return n;
    }
    IVec decode(long long idx) const {
        IVec n(lo.size());
        for (size_t i = 0; i < lo.size(); ++i) {
            long long w = hi[i] - lo[i] + 1;
            n[i] = lo[i] + idx % w;
            idx /= w;
        }
        return n;
    }
};

// Bounding box of tau*P shifted by -x, rounded outward.
LatticeBox bounding_box(const SimplicialComplex& P, const RatVec& x, const Rat& tau) {
    int d = P.d;
    RatVec lo(d), hi(d);
    bool first = true;
    for (const auto& s : P.simplices) {
        for (const auto& v : s.vertices()) {
            for (int i = 0; i < d; ++i) {
                Rat c = tau * rat_of(v[i]) - x[i];
                if (first || c < lo[i]) lo[i] = c;
                if (first || c > hi[i]) hi[i] = c;
            }
            first = false;
        }
    }
    LatticeBox box;
    box.lo.resize(d);
    box.hi.resize(d);
    for (int i = 0; i < d; ++i) {
        mpz_class fl, ce;
        mpz_fdiv_q(fl.get_mpz_t(), lo[i].get_num().get_mpz_t(), lo[i].get_den().get_mpz_t());
        mpz_cdiv_q(ce.get_mpz_t(), hi[i].get_num().get_mpz_t(), hi[i].get_den().get_mpz_t());
        box.lo[i] = fl.get_si();
        box.hi[i] = ce.get_si();
    }
    return box;
}

}  // namespace

double weighted_shifted_sum(const SimplicialComplex& P, const ScalarField& q,
                            const std::vector<double>& x, double tau,
                            const SolidAngleMethod& method, ExecMode mode) {
    if (tau <= 0) throw std::invalid_argument("weighted_shifted_sum: tau must be positive");
    RatVec xr = rat_vec(x);
    Rat taur = rat_from_double(tau);
    LatticeBox box = bounding_box(P, xr, taur);
    const int d = P.d;
    return block_sum<double>(
        box.size(),
        [&](long long idx) {
            IVec n = box.decode(idx);
            RatVec pt(d);
            std::vector<double> ptd(d);
            for (int i = 0; i < d; ++i) {
                pt[i] = xr[i] + rat_of(n[i]);
                ptd[i] = to_double(pt[i]);
            }
            double w = solid_angle(P, pt, taur, method);
            if (w == 0.0) return 0.0;
            return w * q.eval(ptd);
        },
        mode);
}

double weighted_sum(const SimplicialComplex& P, const ScalarField& f, long long N,
                    const SolidAngleMethod& method, ExecMode mode) {
    if (N < 1) throw std::invalid_argument("weighted_sum: N must be >= 1");
    RatVec zero(P.d, Rat(0));
    Rat taur = rat_of(N);
    LatticeBox box = bounding_box(P, zero, taur);
    const int d = P.d;
    double scale = std::pow(static_cast<double>(N), -d);
    double total = block_sum<double>(
        box.size(),
        [&](long long idx) {
            IVec n = box.decode(idx);
            RatVec pt(d);
            for (int i = 0; i < d; ++i) pt[i] = rat_of(n[i]);
            double w = solid_angle(P, pt, taur, method);
            if (w == 0.0) return 0.0;
            std::vector<double> y(d);
            for (int i = 0; i < d; ++i) y[i] = static_cast<double>(n[i]) / static_cast<double>(N);
            return w * f.eval(y);
        },
        mode);
    return scale * total;
}

double weighted_lattice_count(const SimplicialComplex& P, long long tau,
                              const SolidAngleMethod& method, ExecMode mode) {
    if (tau < 1) throw std::invalid_argument("weighted_lattice_count: tau must be >= 1");
    RatVec zero(P.d, Rat(0));
    Rat taur = rat_of(tau);
    LatticeBox box = bounding_box(P, zero, taur);
    const int d = P.d;
    return block_sum<double>(
        box.size(),
        [&](long long idx) {
            IVec n = box.decode(idx);
            RatVec pt(d);
            for (int i = 0; i < d; ++i) pt[i] = rat_of(n[i]);
            return solid_angle(P, pt, taur, method);
        },
        mode);
}

namespace {

IVec sub(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

IntegerSimplex simplex_from_vertices(const std::vector<IVec>& vs) {
    int d = static_cast<int>(vs[0].size());
    IMat M(d, IVec(d));
    for (int j = 0; j < d; ++j) {
        IVec e = sub(vs[j + 1], vs[0]);
        for (int i = 0; i < d; ++i) M[i][j] = e[i];
    }
    return IntegerSimplex(vs[0], M);
}

SimplicialComplex triangulate_2d(std::vector<IVec> vertices) {
    // Fan around the lexicographically smallest vertex, neighbors sorted
    // by angle (exact cross products).
    auto v0_it = std::min_element(vertices.begin(), vertices.end());
    IVec v0 = *v0_it;
    vertices.erase(v0_it);
    std::sort(vertices.begin(), vertices.end(), [&](const IVec& a, const IVec& b) {
        IVec ra = sub(a, v0), rb = sub(b, v0);
        long long cr = ra[0] * rb[1] - ra[1] * rb[0];
        if (cr != 0) return cr > 0;
        return ra[0] * ra[0] + ra[1] * ra[1] < rb[0] * rb[0] + rb[1] * rb[1];
    });
    std::vector<IntegerSimplex> tris;
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        IVec ra = sub(vertices[i], v0), rb = sub(vertices[i + 1], v0);
        if (ra[0] * rb[1] - ra[1] * rb[0] == 0) continue;  // collinear with fan apex
        tris.push_back(simplex_from_vertices({v0, vertices[i], vertices[i + 1]}));
    }
    if (tris.empty()) throw std::invalid_argument("triangulate_convex: degenerate input");
    return SimplicialComplex(std::move(tris));
}

struct Plane {
    IVec normal;
    long long offset;  // normal . x = offset on the plane
};

long long idot(const IVec& a, const IVec& b) {
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IVec icross(const IVec& a, const IVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

SimplicialComplex triangulate_3d(const std::vector<IVec>& vertices) {
    size_t n = vertices.size();
    // Collect supporting planes: triples whose plane has all points on one
    // side. Small inputs only, so the quartic scan is fine.
    std::set<std::pair<IVec, long long>> seen;
    std::vector<std::vector<size_t>> facets;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                IVec nu = icross(sub(vertices[j], vertices[i]), sub(vertices[k], vertices[i]));
                if (nu == IVec{0, 0, 0}) continue;
                long long off = idot(nu, vertices[i]);
                bool pos = false, neg = false;
                for (size_t t = 0; t < n; ++t) {
                    long long s = idot(nu, vertices[t]) - off;
                    pos = pos || s > 0;
                    neg = neg || s < 0;
                }
                if (pos && neg) continue;
                IVec key = nu;
                long long koff = off;
                if (pos) {  // orient outward consistently
                    for (auto& c : key) c = -c;
                    koff = -koff;
                }
                // normalize by gcd (g divides koff since the plane passes
                // through lattice points)
                long long g = 0;
                for (long long c : key) g = std::gcd(g, std::llabs(c));
                if (g > 1) {
                    for (auto& c : key) c /= g;
                    koff /= g;
                }
                if (!seen.insert({key, koff}).second) continue;
                std::vector<size_t> face;
                for (size_t t = 0; t < n; ++t)
                    if (idot(nu, vertices[t]) == off) face.push_back(t);
                facets.push_back(std::move(face));
            }
    if (facets.empty()) throw std::invalid_argument("triangulate_convex: degenerate input");

    // Fan from vertex 0 over the facets that do not contain it; each facet
    // polygon is itself fanned from its first vertex.
    const IVec& apex = vertices[0];
    std::vector<IntegerSimplex> tets;
    for (const auto& face : facets) {
        if (std::find_if(face.begin(), face.end(),
                         [&](size_t t) { return vertices[t] == apex; }) != face.end())
            continue;
        // order face vertices around their centroid
        std::vector<size_t> ordered = face;
        IVec nu = icross(sub(vertices[face[1]], vertices[face[0]]),
                         sub(vertices[face[2]], vertices[face[0]]));
        const IVec& ref = vertices[face[0]];
        std::sort(ordered.begin() + 1, ordered.end(), [&](size_t a, size_t b) {
            // angular order around ref within the plane: sign of the triple
            // product disambiguates
            IVec ra = sub(vertices[a], ref), rb = sub(vertices[b], ref);
            long long trip = idot(nu, icross(ra, rb));
            if (trip != 0) return trip > 0;
            return idot(ra, ra) < idot(rb, rb);
        });
        for (size_t i = 1; i + 1 < ordered.size(); ++i) {
            const IVec& a = vertices[ordered[0]];
            const IVec& b = vertices[ordered[i]];
            const IVec& c = vertices[ordered[i + 1]];
            if (idot(sub(b, a), icross(sub(c, a), sub(apex, a))) == 0) continue;
            tets.push_back(simplex_from_vertices({apex, a, b, c}));
        }
    }
    if (tets.empty()) throw std::invalid_argument("triangulate_convex: degenerate input");
    return SimplicialComplex(std::move(tets));
}

}  // namespace

SimplicialComplex triangulate_convex(const std::vector<IVec>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("triangulate_convex: no vertices");
    int d = static_cast<int>(vertices[0].size());
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != d)
            throw std::invalid_argument("triangulate_convex: mixed dimensions");
    if (d == 1) {
        auto [lo, hi] = std::minmax_element(vertices.begin(), vertices.end());
        if ((*lo)[0] == (*hi)[0]) throw std::invalid_argument("triangulate_convex: degenerate input");
        return SimplicialComplex::single(IntegerSimplex(*lo, {{(*hi)[0] - (*lo)[0]}}));
    }
    if (d == 2) return triangulate_2d(vertices);
    if (d == 3) return triangulate_3d(vertices);
    throw std::invalid_argument("triangulate_convex: only d <= 3 supported");
}

SimplicialComplex complex_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int d = j.at("d").get<int>();
    std::vector<IntegerSimplex> simplices;
    for (const auto& s : j.at("simplices")) {
        IVec p = s.at("p").get<IVec>();
        auto cols = s.at("M").get<std::vector<IVec>>();
        if (static_cast<int>(p.size()) != d || static_cast<int>(cols.size()) != d)
            throw std::invalid_argument("complex_from_json: dimension mismatch");
        IMat M(d, IVec(d));
        for (int c = 0; c < d; ++c) {
            if (static_cast<int>(cols[c].size()) != d)
                throw std::invalid_argument("complex_from_json: ragged M");
            for (int r = 0; r < d; ++r) M[r][c] = cols[c][r];
        }
        simplices.emplace_back(std::move(p), std::move(M));
    }
    return SimplicialComplex(std::move(simplices));
}

std::string complex_to_json(const SimplicialComplex& P) {
    nlohmann::json j;
    j["d"] = P.d;
    j["simplices"] = nlohmann::json::array();
    for (const auto& s : P.simplices) {
        nlohmann::json e;
        e["p"] = s.p;
        std::vector<IVec> cols(P.d, IVec(P.d));
        for (int c = 0; c < P.d; ++c)
            for (int r = 0; r < P.d; ++r) cols[c][r] = s.M[r][c];
        e["M"] = cols;
        j["simplices"].push_back(std::move(e));
    }
    return j.dump();
}

SimplicialComplex load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open complex file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return complex_from_json(ss.str());
}

}  // namespace sm
