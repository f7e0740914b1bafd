#ifndef TRIKERNEL_MODEL_HPP
#define TRIKERNEL_MODEL_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trikernel/errors.hpp"

namespace trikernel {

using Step = std::pair<int, int>;

// A small-step model: a set of jumps in {-1,0,1}^2 \ {(0,0)}. Steps are kept
// sorted lexicographically so equal sets serialize identically.
// phi_transform may produce longer steps; those are representable but
// rejected by the kernel layer.
class StepSet {
public:
    StepSet() = default;
    StepSet(std::initializer_list<Step> steps, std::string name = "");
    explicit StepSet(std::vector<Step> steps, std::string name = "");

    const std::vector<Step>& steps() const { return steps_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    bool contains(int di, int dj) const;
    bool small_steps() const; // all jumps within {-1,0,1}^2
    size_t size() const { return steps_.size(); }

    bool operator==(const StepSet& o) const { return steps_ == o.steps_; }

private:
    std::vector<Step> steps_; // sorted, unique
    std::string name_;
    void validate_well_formed() const;
};

struct ModelValidation {
    bool symmetric = false;
    bool has_antidiagonal = false;
    bool satisfies_H = false;
};

// Order of the dihedral group generated by the two kernel involutions, or
// Infinite when the orbit did not close within the iteration cap.
struct GroupOrder {
    bool finite = false;
    int order = 0;    // valid when finite
    int bound = 0;    // iteration cap used when infinite
    bool operator==(const GroupOrder& o) const {
        return finite == o.finite && (finite ? order == o.order : bound == o.bound);
    }
};

ModelValidation validate(const StepSet& steps);

// (i,j) -> (i-j, i) applied to every step.
StepSet phi_transform(const StepSet& steps);

// Mirror through the diagonal: (i,j) -> (j,i).
StepSet mirror(const StepSet& steps);

// Orbit length of (x,y) under alternating applications of the involutions
//   Phi(x,y) = (ct(y)/(at(y) x), y),  Psi(x,y) = (x, c(x)/(a(x) y)),
// computed by exact iteration on pairs of rational functions in x, y with
// integer coefficients (the factor t cancels in both ratios). When the
// symbolic representation grows past an internal budget, exact evaluation is
// continued on fixed rational probe points; a closure detected there is
// confirmed symbolically before being reported.
GroupOrder group_order(const StepSet& steps, int max_iter = 400);

// Named models: the classic quadrant walks plus every symmetric model
// without antidiagonal jumps.
std::optional<StepSet> model_preset(const std::string& name);
std::vector<std::string> model_preset_names();

} // namespace trikernel

#endif
