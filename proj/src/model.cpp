#include "trikernel/model.hpp"

#include <algorithm>
#include <map>

#include "trikernel/poly.hpp"
#include "trikernel/rational.hpp"

namespace trikernel {

StepSet::StepSet(std::initializer_list<Step> steps, std::string name)
    : StepSet(std::vector<Step>(steps), std::move(name)) {}

StepSet::StepSet(std::vector<Step> steps, std::string name)
    : steps_(std::move(steps)), name_(std::move(name)) {
    std::sort(steps_.begin(), steps_.end());
    steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
    validate_well_formed();
}

void StepSet::validate_well_formed() const {
    if (steps_.empty()) throw InvalidArgument("step set must be nonempty");
    for (const auto& [di, dj] : steps_)
        if (di == 0 && dj == 0) throw InvalidArgument("step set cannot contain (0,0)");
}

bool StepSet::contains(int di, int dj) const {
    return std::binary_search(steps_.begin(), steps_.end(), Step{di, dj});
}

bool StepSet::small_steps() const {
    for (const auto& [di, dj] : steps_)
        if (di < -1 || di > 1 || dj < -1 || dj > 1) return false;
    return true;
}

ModelValidation validate(const StepSet& steps) {
    ModelValidation v;
    v.symmetric = true;
    for (const auto& [di, dj] : steps.steps())
        if (!steps.contains(dj, di)) {
            v.symmetric = false;
            break;
        }
    v.has_antidiagonal = steps.contains(-1, 1) || steps.contains(1, -1);
    v.satisfies_H = v.symmetric && !v.has_antidiagonal;
    return v;
}

StepSet phi_transform(const StepSet& steps) {
    std::vector<Step> out;
    out.reserve(steps.size());
    for (const auto& [i, j] : steps.steps()) out.emplace_back(i - j, i);
    std::string name = steps.name().empty() ? "" : "phi(" + steps.name() + ")";
    return StepSet(std::move(out), std::move(name));
}

StepSet mirror(const StepSet& steps) {
    std::vector<Step> out;
    out.reserve(steps.size());
    for (const auto& [i, j] : steps.steps()) out.emplace_back(j, i);
    return StepSet(std::move(out));
}

namespace {

// ---- exact orbit machinery -------------------------------------------------

// Bivariate polynomial over Int, exponents >= 0.
struct Poly2 {
    std::map<std::pair<int, int>, Int> m;

    static Poly2 term(int i, int j, Int c) {
        Poly2 p;
        if (c != 0) p.m[{i, j}] = std::move(c);
        return p;
    }
    bool zero() const { return m.empty(); }
    size_t terms() const { return m.size(); }

    Poly2 operator*(const Poly2& o) const {
        Poly2 r;
        for (const auto& [ea, ca] : m)
            for (const auto& [eb, cb] : o.m) {
                auto key = std::pair<int, int>{ea.first + eb.first, ea.second + eb.second};
                auto it = r.m.emplace(key, Int(0)).first;
                it->second += ca * cb;
                if (it->second == 0) r.m.erase(it);
            }
        return r;
    }
    Poly2 operator+(const Poly2& o) const {
        Poly2 r = *this;
        for (const auto& [e, c] : o.m) {
            auto it = r.m.emplace(e, Int(0)).first;
            it->second += c;
            if (it->second == 0) r.m.erase(it);
        }
        return r;
    }
    bool operator==(const Poly2& o) const { return m == o.m; }
};

// Unreduced rational function; equality by cross-multiplication.
struct Rat2 {
    Poly2 num, den;
    bool equals(const Rat2& o) const { return num * o.den == o.num * den; }
    size_t terms() const { return num.terms() + den.terms(); }
};

struct OrbitPoint {
    Rat2 x, y;
};

// Sum over selected steps of variable^(index+1), as a univariate in x or y
// embedded into Poly2. axis 0 = polynomial in x, axis 1 = polynomial in y.
Poly2 step_sum(const StepSet& s, int axis, int fixed_value) {
    // axis 0: sum over (i, fixed) in S of x^{i+1}; axis 1: sum over (fixed, j) of y^{j+1}
    Poly2 p;
    for (const auto& [di, dj] : s.steps()) {
        if (axis == 0 && dj == fixed_value) p = p + Poly2::term(di + 1, 0, 1);
        if (axis == 1 && di == fixed_value) p = p + Poly2::term(0, dj + 1, 1);
    }
    return p;
}

// Univariate gcd over Q and exact division, used to reduce the two step-sum
// ratios before any composition (uncancelled factors there square in size
// with every arrow of the orbit).
Poly<Rat> gcd_1var(Poly<Rat> a, Poly<Rat> b) {
    auto monic = [](Poly<Rat> p) {
        if (p.is_zero()) return p;
        Rat inv = 1 / p.coeff(static_cast<size_t>(p.degree()));
        return p * inv;
    };
    while (!b.is_zero()) {
        Poly<Rat> r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Rat f = r.coeff(static_cast<size_t>(r.degree())) /
                    b.coeff(static_cast<size_t>(b.degree()));
            long shift = r.degree() - b.degree();
            Poly<Rat> sub;
            for (long k = 0; k <= b.degree(); ++k)
                sub.set_coeff(static_cast<size_t>(k + shift),
                              b.coeff(static_cast<size_t>(k)) * f);
            r = r - sub;
        }
        a = b;
        b = r;
    }
    return monic(a);
}

Poly<Rat> divexact_1var(const Poly<Rat>& a, const Poly<Rat>& b) {
    Poly<Rat> rem = a, q;
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        Rat f = rem.coeff(static_cast<size_t>(rem.degree())) /
                b.coeff(static_cast<size_t>(b.degree()));
        long shift = rem.degree() - b.degree();
        q.set_coeff(static_cast<size_t>(shift), f);
        Poly<Rat> sub;
        for (long k = 0; k <= b.degree(); ++k)
            sub.set_coeff(static_cast<size_t>(k + shift), b.coeff(static_cast<size_t>(k)) * f);
        rem = rem - sub;
    }
    if (!rem.is_zero()) throw InvalidArgument("division was not exact");
    return q;
}

// Reduce a univariate-in-one-axis ratio and re-embed it into Poly2 form,
// clearing rational denominators.
std::pair<Poly2, Poly2> reduced_ratio(const Poly2& num2, const Poly2& den2, int axis) {
    auto to_1var = [&](const Poly2& p) {
        Poly<Rat> u;
        for (const auto& [e, c] : p.m)
            u.set_coeff(static_cast<size_t>(axis == 0 ? e.first : e.second), Rat(c));
        return u;
    };
    Poly<Rat> n = to_1var(num2), d = to_1var(den2);
    Poly<Rat> g = gcd_1var(n, d);
    if (g.degree() > 0) {
        n = divexact_1var(n, g);
        d = divexact_1var(d, g);
    }
    Int lcm_den = 1;
    auto fold = [&](const Poly<Rat>& p) {
        for (long k = 0; k <= p.degree(); ++k) {
            const Rat c = p.coeff(static_cast<size_t>(k));
            if (c != 0) lcm_den = lcm(lcm_den, Int(c.get_den()));
        }
    };
    fold(n);
    fold(d);
    auto back = [&](const Poly<Rat>& p) {
        Poly2 r;
        for (long k = 0; k <= p.degree(); ++k) {
            Rat c = p.coeff(static_cast<size_t>(k)) * Rat(lcm_den);
            if (c != 0)
                r = r + Poly2::term(axis == 0 ? static_cast<int>(k) : 0,
                                    axis == 0 ? 0 : static_cast<int>(k), Int(c.get_num()));
        }
        return r;
    };
    return {back(n), back(d)};
}

// Cancel common monomial and integer content of an unreduced fraction.
void light_reduce(Rat2& r) {
    if (r.num.zero() || r.den.zero()) return;
    int mi = 1 << 28, mj = 1 << 28;
    Int content = 0;
    auto scan = [&](const Poly2& p) {
        for (const auto& [e, c] : p.m) {
            mi = std::min(mi, e.first);
            mj = std::min(mj, e.second);
            content = gcd(content, c);
        }
    };
    scan(r.num);
    scan(r.den);
    if (content < 0) content = -content;
    if (mi == 0 && mj == 0 && content == 1) return;
    auto strip = [&](Poly2& p) {
        Poly2 out;
        for (const auto& [e, c] : p.m) out.m[{e.first - mi, e.second - mj}] = c / content;
        p = out;
    };
    strip(r.num);
    strip(r.den);
}

// Substitute a rational point (x,y) = (X, Y) into a Poly2; exact.
Rat eval_poly2(const Poly2& p, const Rat& X, const Rat& Y) {
    Rat acc(0);
    for (const auto& [e, c] : p.m) {
        Rat t(c);
        for (int k = 0; k < e.first; ++k) t *= X;
        for (int k = 0; k < e.second; ++k) t *= Y;
        acc += t;
    }
    return acc;
}

// Substitute a rational function pair into a univariate-in-one-axis Poly2,
// returning (numerator, denominator).
Rat2 subst(const Poly2& poly, int axis, const Rat2& arg) {
    // poly is univariate in the given axis; write sum c_k v^k and build
    // sum c_k N^k D^{deg-k} / D^{deg}.
    int deg = 0;
    for (const auto& [e, c] : poly.m) deg = std::max(deg, axis == 0 ? e.first : e.second);
    std::vector<Poly2> npow(static_cast<size_t>(deg) + 1), dpow(static_cast<size_t>(deg) + 1);
    npow[0] = Poly2::term(0, 0, 1);
    dpow[0] = Poly2::term(0, 0, 1);
    for (int k = 1; k <= deg; ++k) {
        npow[static_cast<size_t>(k)] = npow[static_cast<size_t>(k - 1)] * arg.num;
        dpow[static_cast<size_t>(k)] = dpow[static_cast<size_t>(k - 1)] * arg.den;
    }
    Poly2 num;
    for (const auto& [e, c] : poly.m) {
        int k = axis == 0 ? e.first : e.second;
        Poly2 t = npow[static_cast<size_t>(k)] * dpow[static_cast<size_t>(deg - k)];
        Poly2 ct = Poly2::term(0, 0, c);
        num = num + t * ct;
    }
    return {num, dpow[static_cast<size_t>(deg)]};
}

// The symbolic orbit is only needed while a finite closure is still possible:
// small-step kernels have dihedral groups of order at most 8 when finite, so
// a handful of exact arrows decides every finite case. Beyond that the
// unreduced representation (and its integer coefficients) grows exponentially
// and iteration continues on exact rational probe points instead.
constexpr int kSymbolicArrowCap = 16;
constexpr size_t kTermBudget = 4000;

} // namespace

GroupOrder group_order(const StepSet& steps, int max_iter) {
    if (!steps.small_steps()) throw StepsTooLarge("group is defined for small steps only");
    Poly2 a_up = step_sum(steps, 0, 1);    // steps with dj=+1, polynomial in x
    Poly2 a_dn = step_sum(steps, 0, -1);   // dj=-1
    Poly2 at_up = step_sum(steps, 1, 1);   // di=+1, polynomial in y
    Poly2 at_dn = step_sum(steps, 1, -1);  // di=-1
    if (a_up.zero() || at_up.zero())
        throw DegenerateModel("group involutions need a step with dj=+1 and one with di=+1");
    auto [psi_n, psi_d] = reduced_ratio(a_dn, a_up, 0);   // c(x)/a(x)
    auto [phi_n, phi_d] = reduced_ratio(at_dn, at_up, 1); // ct(y)/at(y)

    // Phi: x' = (phi_n/phi_d)(y) / x; Psi: y' = (psi_n/psi_d)(x) / y.
    auto apply_phi = [&](const OrbitPoint& p) {
        Rat2 n = subst(phi_n, 1, p.y);
        Rat2 d = subst(phi_d, 1, p.y);
        Rat2 xr{n.num * d.den * p.x.den, n.den * d.num * p.x.num};
        light_reduce(xr);
        return OrbitPoint{xr, p.y};
    };
    auto apply_psi = [&](const OrbitPoint& p) {
        Rat2 n = subst(psi_n, 0, p.x);
        Rat2 d = subst(psi_d, 0, p.x);
        Rat2 yr{n.num * d.den * p.y.den, n.den * d.num * p.y.num};
        light_reduce(yr);
        return OrbitPoint{p.x, yr};
    };

    OrbitPoint start{{Poly2::term(1, 0, 1), Poly2::term(0, 0, 1)},
                     {Poly2::term(0, 1, 1), Poly2::term(0, 0, 1)}};
    auto closed = [&](const OrbitPoint& p) {
        return p.x.equals(start.x) && p.y.equals(start.y);
    };

    OrbitPoint cur = start;
    int arrows = 0;
    bool symbolic_ok = true;
    while (arrows < std::min(max_iter, kSymbolicArrowCap)) {
        cur = (arrows % 2 == 0) ? apply_phi(cur) : apply_psi(cur);
        ++arrows;
        if (closed(cur)) return GroupOrder{true, arrows, 0};
        if (cur.x.terms() + cur.y.terms() > kTermBudget) {
            symbolic_ok = false;
            break;
        }
    }
    if (symbolic_ok && arrows >= max_iter) return GroupOrder{false, 0, max_iter};

    // Probe continuation: iterate exactly on fixed rational points. Division
    // by zero at a probe (a measure-zero accident) disables that probe.
    const std::vector<std::pair<Rat, Rat>> seeds = {
        {Rat(3, 5), Rat(7, 11)}, {Rat(5, 7), Rat(2, 9)}, {Rat(4, 13), Rat(8, 3)}};
    auto phi_pt = [&](std::pair<Rat, Rat>& p) {
        Rat n = eval_poly2(phi_n, p.first, p.second);
        Rat d = eval_poly2(phi_d, p.first, p.second) * p.first;
        if (d == 0) return false;
        p.first = n / d;
        return true;
    };
    auto psi_pt = [&](std::pair<Rat, Rat>& p) {
        Rat n = eval_poly2(psi_n, p.first, p.second);
        Rat d = eval_poly2(psi_d, p.first, p.second) * p.second;
        if (d == 0) return false;
        p.second = n / d;
        return true;
    };
    // Exact rational heights blow up exponentially along non-periodic orbits,
    // so cap the numerator size; a periodic orbit keeps heights bounded.
    const size_t kBitCap = 1 << 14;
    for (const auto& seed : seeds) {
        auto p = seed;
        bool alive = true;
        for (int k = 1; k <= max_iter && alive; ++k) {
            alive = (k % 2 == 1) ? phi_pt(p) : psi_pt(p);
            if (!alive) break;
            if (p == seed) {
                // Candidate closure: confirm symbolically along this length.
                OrbitPoint q = start;
                for (int j = 0; j < k; ++j) q = (j % 2 == 0) ? apply_phi(q) : apply_psi(q);
                if (closed(q)) return GroupOrder{true, k, 0};
                break;
            }
            if (mpz_sizeinbase(p.first.get_num().get_mpz_t(), 2) > kBitCap ||
                mpz_sizeinbase(p.second.get_num().get_mpz_t(), 2) > kBitCap)
                break;
        }
    }
    return GroupOrder{false, 0, max_iter};
}

namespace {

const Step N{0, 1}, S{0, -1}, E{1, 0}, W{-1, 0}, NE{1, 1}, NW{-1, 1}, SE{1, -1}, SW{-1, -1};

const std::vector<std::pair<std::string, StepSet>>& preset_table() {
    static const std::vector<std::pair<std::string, StepSet>> table = {
        {"simple", StepSet({N, S, E, W}, "simple")},
        {"diagonal", StepSet({NE, NW, SE, SW}, "diagonal")},
        {"gouyou-beauchamps", StepSet({E, W, SE, NW}, "gouyou-beauchamps")},
        {"kreweras", StepSet({NE, S, W}, "kreweras")},
        {"reverse-kreweras", StepSet({N, E, SW}, "reverse-kreweras")},
        {"double-kreweras", StepSet({NE, S, W, N, E, SW}, "double-kreweras")},
        {"gessel", StepSet({NE, W, E, SW}, "gessel")},
        {"e-ne-n-sw", StepSet({E, NE, N, SW}, "e-ne-n-sw")},
        {"w-ne-s-sw", StepSet({W, NE, S, SW}, "w-ne-s-sw")},
        {"e-w-n-s-sw", StepSet({E, W, N, S, SW}, "e-w-n-s-sw")},
        {"e-w-n-s-ne", StepSet({E, W, N, S, NE}, "e-w-n-s-ne")},
    };
    return table;
}

} // namespace

std::optional<StepSet> model_preset(const std::string& name) {
    std::string key = name;
    if (key == "union-kreweras") key = "double-kreweras";
    for (const auto& [n, s] : preset_table())
        if (n == key) return s;
    return std::nullopt;
}

std::vector<std::string> model_preset_names() {
    std::vector<std::string> names;
    for (const auto& [n, s] : preset_table()) names.push_back(n);
    names.push_back("union-kreweras");
    return names;
}

} // namespace trikernel
