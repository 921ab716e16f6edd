#include "rem/design.hpp"

#include <cmath>
#include <limits>

namespace rem {

const TermBlock& DifferenceDesign::block(const std::string& name) const {
    for (const TermBlock& b : blocks) {
        if (b.name == name) return b;
    }
    throw ConfigError("DifferenceDesign: unknown term " + name);
}

int DifferenceDesign::penalized_count() const {
    int c = 0;
    for (const TermBlock& b : blocks) c += b.penalized ? 1 : 0;
    return c;
}

DifferenceDesign assemble_difference_design(const ShiftedCaseControlSet& ccs,
                                            const CovariateCatalog& catalog,
                                            const EventSequence& original,
                                            const std::vector<TermSpec>& terms) {
    if (terms.empty()) throw ConfigError("assemble_difference_design: no terms");
    DifferenceDesign design;
    design.dropped_rows = ccs.dropped_uninformative;
    const int n = static_cast<int>(ccs.rows.size());

    int col = 0;
    for (const TermSpec& term : terms) {
        TermBlock block;
        block.name = term.name;
        block.event_values.resize(n);
        block.control_values.resize(n);
        for (int k = 0; k < n; ++k) {
            const CaseControlRow& row = ccs.rows[k];
            double ev, cv;
            try {
                ev = eval_covariate(term.covariate, catalog, original,
                                    row.event_dyad, row.event_time);
                cv = eval_covariate(term.covariate, catalog, original,
                                    row.control_dyad, row.control_time);
            } catch (const std::exception& e) {
                throw ConfigError("term '" + term.name + "', row " + std::to_string(k) +
                                  ": " + e.what());
            }
            if (!std::isfinite(ev) || !std::isfinite(cv)) {
                // missing attribute (e.g. station absent from the distance
                // matrix): this row contributes a structural zero to the term
                ev = cv = std::numeric_limits<double>::quiet_NaN();
                ++design.nonfinite_zeroed;
            }
            block.event_values[k] = ev;
            block.control_values[k] = cv;
        }
        std::vector<double> sample;
        sample.reserve(2 * n);
        for (double v : block.event_values) {
            if (std::isfinite(v)) sample.push_back(v);
        }
        for (double v : block.control_values) {
            if (std::isfinite(v)) sample.push_back(v);
        }
        if (sample.empty()) {
            throw ConfigError("term '" + term.name + "': covariate undefined on every row");
        }
        block.basis = BasisSpec::build(term.kind, term.rank, sample,
                                       BasisOptions{term.period,
                                                    term.kind != BasisKind::CyclicPSpline});
        block.col0 = col;
        block.ncols = block.basis.dim();
        block.penalized = term.kind != BasisKind::Linear;
        col += block.ncols;
        design.blocks.push_back(std::move(block));
    }

    design.rows = Eigen::MatrixXd::Zero(n, col);
    for (const TermBlock& block : design.blocks) {
        for (int k = 0; k < n; ++k) {
            if (!std::isfinite(block.event_values[k])) continue;
            design.rows.block(k, block.col0, 1, block.ncols) =
                (block.basis.eval(block.event_values[k]) -
                 block.basis.eval(block.control_values[k]))
                    .transpose();
        }
    }
    return design;
}

}  // namespace rem
