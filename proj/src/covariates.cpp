#include "rem/covariates.hpp"

#include <algorithm>
#include <cmath>

namespace rem {

StepSeries::StepSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size() || times_.empty()) {
        throw ConfigError("StepSeries: times and values must be non-empty and equal length");
    }
    if (!std::is_sorted(times_.begin(), times_.end())) {
        throw ConfigError("StepSeries: times must be sorted");
    }
}

double StepSeries::at(double t) const {
    // last stamp strictly before t; a query at a stamp returns the previous value
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return values_.front();
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

StepSeries square_wave(double period, double low, double high, double duty,
                       double domain_end) {
    if (period <= 0.0 || duty <= 0.0 || duty >= 1.0) {
        throw ConfigError("square_wave: need period > 0 and duty in (0,1)");
    }
    std::vector<double> times, values;
    for (double t0 = 0.0; t0 <= domain_end + period; t0 += period) {
        times.push_back(t0);
        values.push_back(high);
        times.push_back(t0 + duty * period);
        values.push_back(low);
    }
    return StepSeries(std::move(times), std::move(values));
}

double apply_transform(ValueTransform t, double x) {
    switch (t) {
        case ValueTransform::None: return x;
        case ValueTransform::Log: return std::log(x);
        case ValueTransform::Log1p: return std::log1p(x);
    }
    return x;
}

void CovariateCatalog::set_global(const std::string& name, StepSeries series) {
    global_[name] = [s = std::move(series)](double t) { return s.at(t); };
}

void CovariateCatalog::set_global(const std::string& name, std::function<double(double)> fn) {
    global_[name] = std::move(fn);
}

void CovariateCatalog::set_node_attr(const std::string& name, Eigen::VectorXd values) {
    node_attrs_[name] = std::move(values);
}

void CovariateCatalog::set_dyadic_attr(const std::string& name, Eigen::MatrixXd values) {
    dyadic_attrs_[name] = std::move(values);
}

bool CovariateCatalog::has_global(const std::string& name) const {
    return global_.count(name) > 0;
}
bool CovariateCatalog::has_node_attr(const std::string& name) const {
    return node_attrs_.count(name) > 0;
}
bool CovariateCatalog::has_dyadic_attr(const std::string& name) const {
    return dyadic_attrs_.count(name) > 0;
}

double CovariateCatalog::global_at(const std::string& name, double t) const {
    auto it = global_.find(name);
    if (it == global_.end()) throw ConfigError("unknown global covariate: " + name);
    return it->second(t);
}

const Eigen::VectorXd& CovariateCatalog::node_attr(const std::string& name) const {
    auto it = node_attrs_.find(name);
    if (it == node_attrs_.end()) throw ConfigError("unknown node attribute: " + name);
    return it->second;
}

const Eigen::MatrixXd& CovariateCatalog::dyadic_attr(const std::string& name) const {
    auto it = dyadic_attrs_.find(name);
    if (it == dyadic_attrs_.end()) throw ConfigError("unknown dyadic attribute: " + name);
    return it->second;
}

double CovariateCatalog::time_of_day(double t) const {
    const double h = std::fmod(tod_origin_hours_ + t / 3600.0, 24.0);
    return h < 0.0 ? h + 24.0 : h;
}

double eval_covariate(const CovariateRef& ref, const CovariateCatalog& catalog,
                      const EventSequence& history, const Dyad& dyad, double t) {
    double v = 0.0;
    switch (ref.kind) {
        case CovariateRef::Kind::Time:
            v = t;
            break;
        case CovariateRef::Kind::TimeOfDay:
            v = catalog.time_of_day(t);
            break;
        case CovariateRef::Kind::Global:
            v = catalog.global_at(ref.name, t);
            break;
        case CovariateRef::Kind::NodeSender:
            v = catalog.node_attr(ref.name)(dyad.sender);
            break;
        case CovariateRef::Kind::NodeReceiver:
            v = catalog.node_attr(ref.name)(dyad.receiver);
            break;
        case CovariateRef::Kind::Dyadic:
            v = catalog.dyadic_attr(ref.name)(dyad.sender, dyad.receiver);
            break;
        case CovariateRef::Kind::DyadicAbsDiff: {
            const Eigen::VectorXd& a = catalog.node_attr(ref.name);
            v = std::abs(a(dyad.sender) - a(dyad.receiver));
            break;
        }
        case CovariateRef::Kind::RepetitionIndicator:
            v = repetition_indicator(history, dyad, t);
            break;
        case CovariateRef::Kind::RepetitionDecay:
            v = decay_value({DecayKind::Repetition, ref.half_scale}, history, dyad, t);
            break;
        case CovariateRef::Kind::ReciprocityDecay:
            v = decay_value({DecayKind::Reciprocity, ref.half_scale}, history, dyad, t);
            break;
    }
    return apply_transform(ref.transform, v);
}

bool is_dyadic_kind(CovariateRef::Kind kind) {
    switch (kind) {
        case CovariateRef::Kind::Time:
        case CovariateRef::Kind::TimeOfDay:
        case CovariateRef::Kind::Global:
            return false;
        default:
            return true;
    }
}

bool is_endogenous_kind(CovariateRef::Kind kind) {
    switch (kind) {
        case CovariateRef::Kind::RepetitionIndicator:
        case CovariateRef::Kind::RepetitionDecay:
        case CovariateRef::Kind::ReciprocityDecay:
            return true;
        default:
            return false;
    }
}

bool is_time_varying_kind(CovariateRef::Kind kind) {
    switch (kind) {
        case CovariateRef::Kind::NodeSender:
        case CovariateRef::Kind::NodeReceiver:
        case CovariateRef::Kind::Dyadic:
        case CovariateRef::Kind::DyadicAbsDiff:
        case CovariateRef::Kind::RepetitionIndicator:
            return false;
        default:
            return true;
    }
}

}  // namespace rem
