#ifndef REM_DESIGN_HPP
#define REM_DESIGN_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rem/basis.hpp"
#include "rem/covariates.hpp"
#include "rem/timeshift.hpp"

namespace rem {

struct TermSpec {
    std::string name;
    CovariateRef covariate;
    BasisKind kind = BasisKind::Linear;
    int rank = 10;
    double period = 0.0;  // cyclic kind only
};

struct TermBlock {
    std::string name;
    int col0 = 0;
    int ncols = 0;
    bool penalized = false;
    BasisSpec basis;
    std::vector<double> event_values;    // covariate values entering the block
    std::vector<double> control_values;
};

// One row per kept case-control pair; entries are basis-function differences
// basis(event value) - basis(control value), concatenated over terms. No
// intercept column exists.
struct DifferenceDesign {
    Eigen::MatrixXd rows;
    std::vector<TermBlock> blocks;
    int dropped_rows = 0;      // echoed from sampling
    int nonfinite_zeroed = 0;  // (row, term) cells degraded to structural zeros

    int cols() const { return static_cast<int>(rows.cols()); }
    int n() const { return static_cast<int>(rows.rows()); }
    const TermBlock& block(const std::string& name) const;
    int penalized_count() const;
};

// Covariates are resolved at the back-shifted event/control times against the
// original process history (endogenous kinds see only events strictly before
// the query time). The centering sample is the union of event and control
// values. A non-finite value (e.g. a dyad missing from a distance matrix)
// degrades that row's entry for the term to a structural zero instead of
// aborting; degraded cells are counted in nonfinite_zeroed.
DifferenceDesign assemble_difference_design(const ShiftedCaseControlSet& ccs,
                                            const CovariateCatalog& catalog,
                                            const EventSequence& original,
                                            const std::vector<TermSpec>& terms);

}  // namespace rem

#endif
