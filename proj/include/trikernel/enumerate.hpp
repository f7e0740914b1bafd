#ifndef TRIKERNEL_ENUMERATE_HPP
#define TRIKERNEL_ENUMERATE_HPP

#include <map>
#include <utility>
#include <vector>

#include "trikernel/model.hpp"
#include "trikernel/rational.hpp"

namespace trikernel {

enum class Domain { ThreeQuadrant, Quadrant, LowerWedge, FullPlane };

bool domain_contains(Domain d, int i, int j);
const char* domain_name(Domain d);

// Exact walk counts c_{i,j}(n) for n <= n_max, confined to a domain. The
// support of layer n lies in the L-infinity ball of radius n around the
// start, so storage is a dense (2 n_max + 1)^2 grid per layer.
class CountTable {
public:
    CountTable(StepSet steps, Domain domain, std::pair<int, int> start, int n_max);

    const StepSet& steps() const { return steps_; }
    Domain domain() const { return domain_; }
    std::pair<int, int> start() const { return start_; }
    int n_max() const { return n_max_; }

    const Int& count(int n, int i, int j) const;
    Int layer_sum(int n) const;

private:
    StepSet steps_;
    Domain domain_;
    std::pair<int, int> start_;
    int n_max_;
    int offset_, width_;
    std::vector<std::vector<Int>> layers_;
    static const Int zero_;
    friend CountTable count_walks(const StepSet&, Domain, std::pair<int, int>, int);
};

CountTable count_walks(const StepSet& steps, Domain domain, std::pair<int, int> start,
                       int n_max);

// Generating-function sections: subsets of the counting series selected by a
// support predicate on the end point.
enum class SectionKind {
    C,         // everything (three-quadrant table)
    Lhat,      // i >= 0, j <= i-1
    Dhat,      // i == j >= 0
    Uhat,      // j >= 0, i <= j-1
    DhatLower, // j == i-1
    DhatUpper, // i == j-1
    Lhat0Minus,// i == 0, j < 0
    CMinus0,   // j == 0, i <= 0
    C0Minus,   // i == 0, j <= 0
    C00,       // origin
    Q,         // quadrant table: everything
    QMinus0,   // j == 0, i >= 0
    Q0Minus,   // i == 0, j >= 0
    Q00        // origin
};

struct SectionSeries {
    SectionKind which;
    // coef[n][(i,j)] with the original lattice exponents
    std::vector<std::map<std::pair<int, int>, Int>> coef;
};

SectionSeries extract_section(const CountTable& table, SectionKind which);

// Diagonal section D(y) = sum c_{i,i}(n) y^i t^n as per-layer maps i -> count.
std::vector<std::map<int, Int>> diagonal_series(const CountTable& table);
// Excursion series c_{0,0}(n).
std::vector<Int> excursion_series(const CountTable& table);

// Exact residuals of the counting identities through order t^N:
//  - the one-equation form for symmetric models split along the diagonal,
//  - its image under the change of variable phi,
//  - the three-quadrant equation K C = c C_{-0} + ct C_{0-} - t d_{-1,-1} C_00 - xy,
//  - the quadrant analogue.
// All four must vanish identically; the report carries the largest absolute
// coefficient of each residual.
struct FunctionalEquationReport {
    int order = 0;
    Rat max_abs_lemma_sym;  // diagonal-split equation (hatted coordinates)
    Rat max_abs_octant;     // phi-transformed equation
    Rat max_abs_master;     // three-quadrant equation
    Rat max_abs_quadrant;   // quadrant equation
    bool all_zero() const {
        return max_abs_lemma_sym == 0 && max_abs_octant == 0 && max_abs_master == 0 &&
               max_abs_quadrant == 0;
    }
};

FunctionalEquationReport check_functional_equation(const StepSet& hat_steps, int N);

} // namespace trikernel

#endif
