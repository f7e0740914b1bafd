#ifndef TRIKERNEL_CHECKS_HPP
#define TRIKERNEL_CHECKS_HPP

#include <string>
#include <vector>

#include "trikernel/bvp.hpp"

namespace trikernel {

// One verification outcome: a named residual against its tolerance. Exact
// checks report 0 or 1 with tolerance 0.5.
struct CheckResult {
    std::string name;
    double residual = 0;
    double tol = 0;
    bool pass = false;
    std::string note;
};

CheckResult make_check(std::string name, double residual, double tol, std::string note = "");

// Per-model verification suite used by the command-line `verify` command.
std::vector<CheckResult> verify_model(const StepSet& hat_model, double t, int series_order);

} // namespace trikernel

#endif
