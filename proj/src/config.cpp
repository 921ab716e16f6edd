#include "rem/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rem {

using nlohmann::json;

namespace {

CovariateRef::Kind parse_kind(const std::string& s) {
    if (s == "time") return CovariateRef::Kind::Time;
    if (s == "time-of-day") return CovariateRef::Kind::TimeOfDay;
    if (s == "global") return CovariateRef::Kind::Global;
    if (s == "node-sender") return CovariateRef::Kind::NodeSender;
    if (s == "node-receiver") return CovariateRef::Kind::NodeReceiver;
    if (s == "dyadic") return CovariateRef::Kind::Dyadic;
    if (s == "dyadic-absdiff") return CovariateRef::Kind::DyadicAbsDiff;
    if (s == "repetition") return CovariateRef::Kind::RepetitionIndicator;
    if (s == "repetition-decay") return CovariateRef::Kind::RepetitionDecay;
    if (s == "reciprocity-decay") return CovariateRef::Kind::ReciprocityDecay;
    throw ConfigError("unknown covariate kind: " + s);
}

ValueTransform parse_transform(const std::string& s) {
    if (s == "none") return ValueTransform::None;
    if (s == "log") return ValueTransform::Log;
    if (s == "log1p") return ValueTransform::Log1p;
    throw ConfigError("unknown transform: " + s);
}

BasisKind parse_basis(const std::string& s) {
    if (s == "linear") return BasisKind::Linear;
    if (s == "pspline") return BasisKind::PSpline;
    if (s == "cyclic") return BasisKind::CyclicPSpline;
    throw ConfigError("unknown basis kind: " + s);
}

TermSpec parse_term(const json& j) {
    TermSpec t;
    t.name = j.at("name").get<std::string>();
    const json& c = j.at("covariate");
    t.covariate.kind = parse_kind(c.at("kind").get<std::string>());
    if (c.contains("name")) t.covariate.name = c["name"].get<std::string>();
    if (c.contains("transform")) {
        t.covariate.transform = parse_transform(c["transform"].get<std::string>());
    }
    if (c.contains("half_scale")) t.covariate.half_scale = c["half_scale"].get<double>();
    if (j.contains("basis")) t.kind = parse_basis(j["basis"].get<std::string>());
    if (j.contains("rank")) t.rank = j["rank"].get<int>();
    if (j.contains("period")) t.period = j["period"].get<double>();
    return t;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    cfg.raw_text = json_text;
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (cfg.scenario != "synthetic" && cfg.scenario != "weibull" &&
        cfg.scenario != "observational") {
        throw ConfigError("unknown scenario: " + cfg.scenario);
    }
    if (j.contains("nodes")) cfg.nodes = j["nodes"].get<int>();
    if (j.contains("events")) cfg.events = j["events"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("stream")) cfg.stream = j["stream"].get<std::uint64_t>();
    if (j.contains("nu")) cfg.nu = j["nu"].get<double>();
    if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
    if (j.contains("risk")) {
        const std::string r = j["risk"].get<std::string>();
        if (r == "no-self-loops") {
            cfg.risk = RiskPolicy::NoSelfLoops;
        } else if (r == "all-pairs") {
            cfg.risk = RiskPolicy::AllPairs;
        } else {
            throw ConfigError("unknown risk policy: " + r);
        }
    }
    if (cfg.nodes < 2) throw ConfigError("config: need at least 2 nodes");
    if (cfg.events < 1) throw ConfigError("config: need at least 1 event");
    if (!(cfg.nu > 0.0)) throw ConfigError("config: nu must be positive");

    if (j.contains("truth")) {
        const json& t = j["truth"];
        if (t.contains("lambda0")) cfg.truth.lambda0 = t["lambda0"].get<double>();
        if (t.contains("beta1")) cfg.truth.beta1 = t["beta1"].get<double>();
        if (t.contains("beta2")) cfg.truth.beta2 = t["beta2"].get<double>();
        if (t.contains("beta_rep")) cfg.truth.beta_rep = t["beta_rep"].get<double>();
        if (t.contains("beta0")) cfg.truth.beta0 = t["beta0"].get<double>();
        if (!(cfg.truth.lambda0 > 0.0)) throw ConfigError("config: lambda0 must be positive");
    }
    if (j.contains("wave")) {
        const json& w = j["wave"];
        if (w.contains("period")) cfg.wave.period = w["period"].get<double>();
        if (w.contains("low")) cfg.wave.low = w["low"].get<double>();
        if (w.contains("high")) cfg.wave.high = w["high"].get<double>();
        if (w.contains("duty")) cfg.wave.duty = w["duty"].get<double>();
        if (!(cfg.wave.period > 0.0)) throw ConfigError("config: wave period must be positive");
    }
    if (j.contains("terms")) {
        for (const json& t : j["terms"]) cfg.terms.push_back(parse_term(t));
    }
    if (j.contains("smoothing")) {
        const json& s = j["smoothing"];
        if (s.contains("grid")) cfg.smoothing.grid = s["grid"].get<std::vector<double>>();
        if (s.contains("folds")) cfg.smoothing.folds = s["folds"].get<int>();
        if (s.contains("sweeps")) cfg.smoothing.sweeps = s["sweeps"].get<int>();
        if (s.contains("seed")) cfg.smoothing.seed = s["seed"].get<std::uint64_t>();
    }
    if (j.contains("data")) {
        const json& d = j["data"];
        if (d.contains("events")) cfg.data.events = d["events"].get<std::string>();
        if (d.contains("temperature")) cfg.data.temperature = d["temperature"].get<std::string>();
        if (d.contains("precipitation")) {
            cfg.data.precipitation = d["precipitation"].get<std::string>();
        }
        if (d.contains("distances")) cfg.data.distances = d["distances"].get<std::string>();
        if (d.contains("window_start")) {
            cfg.data.window_start = d["window_start"].get<std::string>();
        }
        if (d.contains("window_end")) cfg.data.window_end = d["window_end"].get<std::string>();
        if (d.contains("max_gap_seconds")) {
            cfg.data.max_gap_seconds = d["max_gap_seconds"].get<double>();
        }
    }
    if (j.contains("study")) {
        const json& s = j["study"];
        if (s.contains("sweep")) cfg.study.sweep = s["sweep"].get<std::string>();
        if (cfg.study.sweep != "n" && cfg.study.sweep != "p" && cfg.study.sweep != "nu") {
            throw ConfigError("unknown study sweep: " + cfg.study.sweep);
        }
        if (s.contains("values")) cfg.study.values = s["values"].get<std::vector<double>>();
        if (s.contains("replications")) cfg.study.replications = s["replications"].get<int>();
        if (s.contains("workers")) cfg.study.workers = s["workers"].get<int>();
    }
    if (j.contains("compare")) {
        const json& c = j["compare"];
        if (c.contains("sample_sizes")) {
            cfg.compare.sample_sizes = c["sample_sizes"].get<std::vector<int>>();
        }
        if (c.contains("replications")) cfg.compare.replications = c["replications"].get<int>();
        if (c.contains("shape")) cfg.compare.shape = c["shape"].get<double>();
        if (c.contains("workers")) cfg.compare.workers = c["workers"].get<int>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a_hex(const std::string& bytes) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot digest missing file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

std::vector<TermSpec> synthetic_terms(int time_rank) {
    std::vector<TermSpec> terms(5);
    terms[0].name = "x_s";
    terms[0].covariate = {CovariateRef::Kind::NodeSender, "x"};
    terms[1].name = "x_sr";
    terms[1].covariate = {CovariateRef::Kind::DyadicAbsDiff, "x"};
    terms[2].name = "rep";
    terms[2].covariate = {CovariateRef::Kind::RepetitionIndicator, ""};
    terms[3].name = "x_t";
    terms[3].covariate = {CovariateRef::Kind::Global, "x"};
    terms[4].name = "g0";
    terms[4].covariate = {CovariateRef::Kind::Time, ""};
    terms[4].kind = BasisKind::PSpline;
    terms[4].rank = time_rank;
    return terms;
}

std::vector<TermSpec> observational_terms(double m_rep, double m_rec) {
    std::vector<TermSpec> terms(9);
    terms[0].name = "temperature";
    terms[0].covariate = {CovariateRef::Kind::Global, "temperature"};
    terms[0].kind = BasisKind::PSpline;
    terms[1].name = "precipitation";
    terms[1].covariate = {CovariateRef::Kind::Global, "precipitation",
                          ValueTransform::Log1p};
    terms[1].kind = BasisKind::PSpline;
    terms[2].name = "time_of_day";
    terms[2].covariate = {CovariateRef::Kind::TimeOfDay, ""};
    terms[2].kind = BasisKind::CyclicPSpline;
    terms[2].period = 24.0;
    terms[3].name = "distance";
    terms[3].covariate = {CovariateRef::Kind::Dyadic, "distance", ValueTransform::Log};
    terms[3].kind = BasisKind::PSpline;
    terms[4].name = "repetition";
    terms[4].covariate = {CovariateRef::Kind::RepetitionDecay, "", ValueTransform::None,
                          m_rep};
    terms[4].kind = BasisKind::PSpline;
    terms[4].rank = 20;
    terms[5].name = "reciprocity";
    terms[5].covariate = {CovariateRef::Kind::ReciprocityDecay, "", ValueTransform::None,
                          m_rec};
    terms[5].kind = BasisKind::PSpline;
    terms[5].rank = 20;
    terms[6].name = "g0";
    terms[6].covariate = {CovariateRef::Kind::Time, ""};
    terms[6].kind = BasisKind::PSpline;
    terms[7].name = "competition_s";
    terms[7].covariate = {CovariateRef::Kind::NodeSender, "competition"};
    terms[8].name = "competition_r";
    terms[8].covariate = {CovariateRef::Kind::NodeReceiver, "competition"};
    return terms;
}

}  // namespace rem
