#ifndef REM_COVARIATES_HPP
#define REM_COVARIATES_HPP

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>

#include "rem/endostats.hpp"
#include "rem/types.hpp"

namespace rem {

// Left-continuous step function: the value over (t_{i-1}, t_i] is the value
// stamped at t_{i-1}. Queries left of the first stamp return the first value.
class StepSeries {
public:
    StepSeries() = default;
    StepSeries(std::vector<double> times, std::vector<double> values);

    double at(double t) const;
    double domain_end() const { return times_.empty() ? 0.0 : times_.back(); }
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

// Periodic two-level step function; value is `high` over the first
// duty-fraction of every period and `low` over the rest, left-continuously.
StepSeries square_wave(double period, double low, double high, double duty,
                       double domain_end);

enum class ValueTransform { None, Log, Log1p };

double apply_transform(ValueTransform t, double x);

// Resolves a covariate value for (dyad, t) given the original process
// history. Endogenous kinds use only events strictly before t.
struct CovariateRef {
    enum class Kind {
        Time,                 // x(t) = t, the global time effect's covariate
        TimeOfDay,            // fractional hours in [0, 24)
        Global,               // named global series / function of t
        NodeSender,           // named node attribute of the sender
        NodeReceiver,         // named node attribute of the receiver
        Dyadic,               // named dyadic attribute
        DyadicAbsDiff,        // |x_s - x_r| of a named node attribute
        RepetitionIndicator,  // binary: dyad occurred before t
        RepetitionDecay,      // exp decay of elapsed same-dyad time
        ReciprocityDecay,     // exp decay of elapsed reciprocal time
    };

    Kind kind = Kind::Time;
    std::string name;                             // attribute/series lookup key
    ValueTransform transform = ValueTransform::None;
    double half_scale = 1.0;                      // decay kinds only
};

// Houses every x entering the intensity: global series, node attributes,
// dyadic attributes and the wall-clock anchor for time-of-day.
class CovariateCatalog {
public:
    void set_global(const std::string& name, StepSeries series);
    void set_global(const std::string& name, std::function<double(double)> fn);
    void set_node_attr(const std::string& name, Eigen::VectorXd values);
    void set_dyadic_attr(const std::string& name, Eigen::MatrixXd values);
    void set_time_of_day_origin(double hours_at_t0) { tod_origin_hours_ = hours_at_t0; }

    bool has_global(const std::string& name) const;
    bool has_node_attr(const std::string& name) const;
    bool has_dyadic_attr(const std::string& name) const;

    double global_at(const std::string& name, double t) const;
    const Eigen::VectorXd& node_attr(const std::string& name) const;
    const Eigen::MatrixXd& dyadic_attr(const std::string& name) const;
    double time_of_day(double t) const;
    double time_of_day_origin() const { return tod_origin_hours_; }

private:
    std::map<std::string, std::function<double(double)>> global_;
    std::map<std::string, Eigen::VectorXd> node_attrs_;
    std::map<std::string, Eigen::MatrixXd> dyadic_attrs_;
    double tod_origin_hours_ = 0.0;
};

double eval_covariate(const CovariateRef& ref, const CovariateCatalog& catalog,
                      const EventSequence& history, const Dyad& dyad, double t);

// true when the covariate value depends on the dyad (node, dyadic or
// endogenous kinds); global kinds depend on t only
bool is_dyadic_kind(CovariateRef::Kind kind);
// true when the covariate value depends on the process history
bool is_endogenous_kind(CovariateRef::Kind kind);
// true when the covariate value changes with t for a fixed history
bool is_time_varying_kind(CovariateRef::Kind kind);

}  // namespace rem

#endif
