#include "trikernel/enumerate.hpp"

#include <algorithm>

namespace trikernel {

const Int CountTable::zero_ = 0;

bool domain_contains(Domain d, int i, int j) {
    switch (d) {
        case Domain::ThreeQuadrant: return i >= 0 || j >= 0;
        case Domain::Quadrant: return i >= 0 && j >= 0;
        case Domain::LowerWedge: return i >= 0 && j <= i;
        case Domain::FullPlane: return true;
    }
    return false;
}

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::ThreeQuadrant: return "3q";
        case Domain::Quadrant: return "quadrant";
        case Domain::LowerWedge: return "lower-wedge";
        case Domain::FullPlane: return "plane";
    }
    return "?";
}

CountTable::CountTable(StepSet steps, Domain domain, std::pair<int, int> start, int n_max)
    : steps_(std::move(steps)), domain_(domain), start_(start), n_max_(n_max) {
    if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
    if (!domain_contains(domain_, start.first, start.second))
        throw StartOutsideDomain("start point (" + std::to_string(start.first) + "," +
                                 std::to_string(start.second) + ") not in " +
                                 domain_name(domain_));
    offset_ = n_max_;
    width_ = 2 * n_max_ + 1;
    layers_.assign(static_cast<size_t>(n_max_) + 1,
                   std::vector<Int>(static_cast<size_t>(width_) * width_, Int(0)));
}

const Int& CountTable::count(int n, int i, int j) const {
    if (n < 0 || n > n_max_) return zero_;
    int a = i - start_.first + offset_, b = j - start_.second + offset_;
    if (a < 0 || a >= width_ || b < 0 || b >= width_) return zero_;
    return layers_[static_cast<size_t>(n)][static_cast<size_t>(a) * width_ + b];
}

Int CountTable::layer_sum(int n) const {
    Int s = 0;
    for (const Int& v : layers_[static_cast<size_t>(n)]) s += v;
    return s;
}

CountTable count_walks(const StepSet& steps, Domain domain, std::pair<int, int> start,
                       int n_max) {
    CountTable t(steps, domain, start, n_max);
    const int off = t.offset_, w = t.width_;
    t.layers_[0][static_cast<size_t>(off) * w + off] = 1;
    for (int n = 0; n < n_max; ++n) {
        const auto& cur = t.layers_[static_cast<size_t>(n)];
        auto& nxt = t.layers_[static_cast<size_t>(n) + 1];
        for (int a = off - n; a <= off + n; ++a) {
            for (int b = off - n; b <= off + n; ++b) {
                const Int& c = cur[static_cast<size_t>(a) * w + b];
                if (c == 0) continue;
                int i = a - off + start.first, j = b - off + start.second;
                for (const auto& [di, dj] : steps.steps()) {
                    int i2 = i + di, j2 = j + dj;
                    if (!domain_contains(domain, i2, j2)) continue;
                    nxt[static_cast<size_t>(a + di) * w + (b + dj)] += c;
                }
            }
        }
    }
    return t;
}

namespace {

bool section_accepts(SectionKind k, int i, int j) {
    switch (k) {
        case SectionKind::C: return true;
        case SectionKind::Lhat: return i >= 0 && j <= i - 1;
        case SectionKind::Dhat: return i == j && i >= 0;
        case SectionKind::Uhat: return j >= 0 && i <= j - 1;
        case SectionKind::DhatLower: return j == i - 1 && i >= 0;
        case SectionKind::DhatUpper: return i == j - 1 && j >= 0;
        case SectionKind::Lhat0Minus: return i == 0 && j < 0;
        case SectionKind::CMinus0: return j == 0 && i <= 0;
        case SectionKind::C0Minus: return i == 0 && j <= 0;
        case SectionKind::C00: return i == 0 && j == 0;
        case SectionKind::Q: return true;
        case SectionKind::QMinus0: return j == 0 && i >= 0;
        case SectionKind::Q0Minus: return i == 0 && j >= 0;
        case SectionKind::Q00: return i == 0 && j == 0;
    }
    return false;
}

} // namespace

SectionSeries extract_section(const CountTable& table, SectionKind which) {
    SectionSeries s;
    s.which = which;
    s.coef.resize(static_cast<size_t>(table.n_max()) + 1);
    auto [si, sj] = table.start();
    for (int n = 0; n <= table.n_max(); ++n) {
        for (int i = si - n; i <= si + n; ++i) {
            for (int j = sj - n; j <= sj + n; ++j) {
                if (!section_accepts(which, i, j)) continue;
                const Int& c = table.count(n, i, j);
                if (c != 0) s.coef[static_cast<size_t>(n)][{i, j}] = c;
            }
        }
    }
    return s;
}

std::vector<std::map<int, Int>> diagonal_series(const CountTable& table) {
    std::vector<std::map<int, Int>> d(static_cast<size_t>(table.n_max()) + 1);
    for (int n = 0; n <= table.n_max(); ++n)
        for (int i = 0; i <= n + std::abs(table.start().first); ++i) {
            const Int& c = table.count(n, i, i);
            if (c != 0) d[static_cast<size_t>(n)][i] = c;
        }
    return d;
}

std::vector<Int> excursion_series(const CountTable& table) {
    std::vector<Int> e(static_cast<size_t>(table.n_max()) + 1);
    for (int n = 0; n <= table.n_max(); ++n) e[static_cast<size_t>(n)] = table.count(n, 0, 0);
    return e;
}

// ---- functional-equation residuals ------------------------------------------

namespace {

// Truncated trivariate Laurent series: per power of t, a sparse Laurent
// polynomial in (x, y) with rational coefficients.
using Tri = std::vector<std::map<std::pair<int, int>, Rat>>;

void tri_add(Tri& T, int n, int i, int j, const Rat& c) {
    if (n >= static_cast<int>(T.size()) || c == 0) return;
    auto it = T[static_cast<size_t>(n)].emplace(std::pair<int, int>{i, j}, Rat(0)).first;
    it->second += c;
    if (it->second == 0) T[static_cast<size_t>(n)].erase(it);
}

// One monomial c * t^dt x^di y^dj acting by multiplication.
struct Mono {
    int dt, di, dj;
    Rat c;
};

Tri apply_monos(const std::vector<Mono>& monos, const Tri& T) {
    Tri R(T.size());
    for (const auto& m : monos)
        for (size_t n = 0; n + static_cast<size_t>(m.dt) < T.size(); ++n)
            for (const auto& [e, c] : T[n])
                tri_add(R, static_cast<int>(n) + m.dt, e.first + m.di, e.second + m.dj,
                        c * m.c);
    return R;
}

Tri from_section(const SectionSeries& s, int N) {
    Tri T(static_cast<size_t>(N) + 1);
    for (size_t n = 0; n < T.size() && n < s.coef.size(); ++n)
        for (const auto& [e, c] : s.coef[n]) T[n][e] = Rat(c);
    return T;
}

Tri tri_sub(Tri a, const Tri& b) {
    for (size_t n = 0; n < a.size() && n < b.size(); ++n)
        for (const auto& [e, c] : b[n]) {
            auto it = a[n].emplace(e, Rat(0)).first;
            it->second -= c;
            if (it->second == 0) a[n].erase(it);
        }
    return a;
}

Rat max_abs(const Tri& T) {
    Rat m(0);
    for (const auto& layer : T)
        for (const auto& [e, c] : layer) m = std::max(m, Rat(abs(c)));
    return m;
}

// Kernel multiplication monomials: K = xy (t sum_S x^di y^dj - 1).
std::vector<Mono> kernel_monos(const StepSet& s) {
    std::vector<Mono> m;
    for (const auto& [di, dj] : s.steps()) m.push_back({1, 1 + di, 1 + dj, Rat(1)});
    m.push_back({0, 1, 1, Rat(-1)});
    return m;
}

// c(x) = t x sum_{(i,-1) in S} x^i and the tilde analogue in y.
std::vector<Mono> c_monos(const StepSet& s) {
    std::vector<Mono> m;
    for (const auto& [di, dj] : s.steps())
        if (dj == -1) m.push_back({1, 1 + di, 0, Rat(1)});
    return m;
}
std::vector<Mono> ct_monos(const StepSet& s) {
    std::vector<Mono> m;
    for (const auto& [di, dj] : s.steps())
        if (di == -1) m.push_back({1, 0, 1 + dj, Rat(1)});
    return m;
}

int delta(const StepSet& s, int i, int j) { return s.contains(i, j) ? 1 : 0; }

} // namespace

FunctionalEquationReport check_functional_equation(const StepSet& hat_steps, int N) {
    if (N < 1) throw InvalidArgument("order must be >= 1");
    ModelValidation v = validate(hat_steps);
    if (!v.satisfies_H)
        throw HypothesisViolated("model must be symmetric without antidiagonal jumps");

    FunctionalEquationReport rep;
    rep.order = N;

    const StepSet s_steps = phi_transform(hat_steps);
    CountTable c3 = count_walks(hat_steps, Domain::ThreeQuadrant, {0, 0}, N);
    CountTable cq = count_walks(hat_steps, Domain::Quadrant, {0, 0}, N);

    Tri C = from_section(extract_section(c3, SectionKind::C), N);
    Tri Lhat = from_section(extract_section(c3, SectionKind::Lhat), N);
    Tri Dhat = from_section(extract_section(c3, SectionKind::Dhat), N);
    Tri L0m = from_section(extract_section(c3, SectionKind::Lhat0Minus), N);
    Tri Cm0 = from_section(extract_section(c3, SectionKind::CMinus0), N);
    Tri C0m = from_section(extract_section(c3, SectionKind::C0Minus), N);
    Tri C00 = from_section(extract_section(c3, SectionKind::C00), N);
    Tri Q = from_section(extract_section(cq, SectionKind::Q), N);
    Tri Qm0 = from_section(extract_section(cq, SectionKind::QMinus0), N);
    Tri Q0m = from_section(extract_section(cq, SectionKind::Q0Minus), N);
    Tri Q00 = from_section(extract_section(cq, SectionKind::Q00), N);

    const Rat half(1, 2);
    const int d11 = delta(hat_steps, 1, 1), dm1m1 = delta(hat_steps, -1, -1);
    const int dm10 = delta(hat_steps, -1, 0), d0m1 = delta(hat_steps, 0, -1);
    const int d10 = delta(hat_steps, 1, 0);

    // Diagonal-split equation, hatted coordinates:
    // Khat Lhat = -xy/2 + t xy (d_{-1,-1}/(xy) + d_{-1,0}/x) Lhat_{0-}
    //             + (t/2) d_{-1,-1} Dhat(0,0)
    //             - xy (-1/2 + t((d_{1,1} xy + d_{-1,-1}/(xy))/2 + d_{0,-1}/y + d_{1,0} x)) Dhat
    {
        Tri lhs = apply_monos(kernel_monos(hat_steps), Lhat);
        Tri rhs(static_cast<size_t>(N) + 1);
        tri_add(rhs, 0, 1, 1, -half);
        std::vector<Mono> l0m_m;
        if (dm1m1) l0m_m.push_back({1, 0, 0, Rat(dm1m1)});
        if (dm10) l0m_m.push_back({1, 0, 1, Rat(dm10)});
        Tri term_l0m = apply_monos(l0m_m, L0m);
        Tri D00(static_cast<size_t>(N) + 1);
        for (size_t n = 0; n < Dhat.size(); ++n) {
            auto it = Dhat[n].find({0, 0});
            if (it != Dhat[n].end()) D00[n][{0, 0}] = it->second;
        }
        Tri term_d00 = apply_monos({{1, 0, 0, half * dm1m1}}, D00);
        std::vector<Mono> dmon = {{0, 1, 1, half},
                                  {1, 2, 2, -half * d11},
                                  {1, 0, 0, -half * dm1m1},
                                  {1, 1, 0, Rat(-d0m1)},
                                  {1, 2, 1, Rat(-d10)}};
        Tri term_d = apply_monos(dmon, Dhat);
        for (const Tri* t : {&term_l0m, &term_d00, &term_d}) {
            for (size_t n = 0; n < rhs.size(); ++n)
                for (const auto& [e, c] : (*t)[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
        }
        rep.max_abs_lemma_sym = max_abs(tri_sub(lhs, rhs));
    }

    // Image under phi(x,y) = (xy, 1/x): K L = c(x) L_{-0} - x (x at(y) + bt(y)/2) D(y)
    //                                        + (t x / 2) D(0) - xy/2,
    // with every coefficient taken for the transformed step set.
    {
        // L(x,y) = sum c_{p,q}(n) x^{p-q} y^p over the lower part, D(y) = diagonal.
        Tri L(static_cast<size_t>(N) + 1), D(static_cast<size_t>(N) + 1),
            Lm0(static_cast<size_t>(N) + 1), D0(static_cast<size_t>(N) + 1);
        for (int n = 0; n <= N; ++n) {
            for (int p = -n; p <= n; ++p)
                for (int q = -n; q <= n; ++q) {
                    const Int& c = c3.count(n, p, q);
                    if (c == 0) continue;
                    if (p >= 0 && q <= p - 1) tri_add(L, n, p - q, p, Rat(c));
                    if (p == q && p >= 0) tri_add(D, n, 0, p, Rat(c));
                    if (p == 0 && q <= -1) tri_add(Lm0, n, -q, 0, Rat(c));
                    if (p == 0 && q == 0) tri_add(D0, n, 0, 0, Rat(c));
                }
        }
        Tri lhs = apply_monos(kernel_monos(s_steps), L);
        Tri rhs = apply_monos(c_monos(s_steps), Lm0);
        // -x (x at(y) + bt(y)/2) D with at(y) = t y sum_{(1,j)} y^j and
        // bt(y) = t y sum_{(0,j)} y^j - y.
        std::vector<Mono> dmon;
        for (const auto& [di, dj] : s_steps.steps()) {
            if (di == 1) dmon.push_back({1, 2, 1 + dj, Rat(-1)});
            if (di == 0) dmon.push_back({1, 1, 1 + dj, -half});
        }
        dmon.push_back({0, 1, 1, half});
        Tri term_d = apply_monos(dmon, D);
        // The D(0) term is inherited from the diagonal equation and carries
        // the (-1,-1) indicator of the original step set.
        Tri term_d0 = apply_monos({{1, 1, 0, half * dm1m1}}, D0);
        for (size_t n = 0; n < rhs.size(); ++n) {
            for (const auto& [e, c] : term_d[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
            for (const auto& [e, c] : term_d0[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
        }
        tri_add(rhs, 0, 1, 1, -half);
        rep.max_abs_octant = max_abs(tri_sub(lhs, rhs));
    }

    // Three-quadrant equation: K C = c(x) C_{-0}(1/x) + ct(y) C_{0-}(1/y)
    //   - t (d_{-1,-1} + d_{0,-1} x + d_{-1,0} y) C_00 - xy.
    // A south (resp. west) step leaves the cone only from strictly negative
    // abscissas (resp. ordinates), so the origin column of the axis sections
    // must be taken back out; the diagonal jump removes it once.
    {
        Tri lhs = apply_monos(kernel_monos(hat_steps), C);
        Tri rhs = apply_monos(c_monos(hat_steps), Cm0);
        Tri r2 = apply_monos(ct_monos(hat_steps), C0m);
        std::vector<Mono> origin = {{1, 0, 0, Rat(-dm1m1)},
                                    {1, 1, 0, Rat(-d0m1)},
                                    {1, 0, 1, Rat(-dm10)}};
        Tri r3 = apply_monos(origin, C00);
        for (size_t n = 0; n < rhs.size(); ++n) {
            for (const auto& [e, c] : r2[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
            for (const auto& [e, c] : r3[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
        }
        tri_add(rhs, 0, 1, 1, Rat(-1));
        rep.max_abs_master = max_abs(tri_sub(lhs, rhs));
    }

    // Quadrant analogue with the same step set.
    {
        Tri lhs = apply_monos(kernel_monos(hat_steps), Q);
        Tri rhs = apply_monos(c_monos(hat_steps), Qm0);
        Tri r2 = apply_monos(ct_monos(hat_steps), Q0m);
        Tri r3 = apply_monos({{1, 0, 0, Rat(-dm1m1)}}, Q00);
        for (size_t n = 0; n < rhs.size(); ++n) {
            for (const auto& [e, c] : r2[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
            for (const auto& [e, c] : r3[n]) tri_add(rhs, static_cast<int>(n), e.first, e.second, c);
        }
        tri_add(rhs, 0, 1, 1, Rat(-1));
        rep.max_abs_quadrant = max_abs(tri_sub(lhs, rhs));
    }

    return rep;
}

} // namespace trikernel
