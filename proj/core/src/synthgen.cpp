#include "filtercast/synthgen.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "filtercast/errors.hpp"
#include "filtercast/rng.hpp"

namespace filtercast {

namespace {

constexpr std::uint64_t kInarTag = 0x696e6172ull;      // "inar"
constexpr std::uint64_t kLabelTag = 0x6c61626cull;     // "labl"

void validate_inar(const InarSpec& spec) {
    if (!(spec.alpha >= 0.0 && spec.alpha < 1.0)) {
        throw ParameterError("gen_inar: alpha must lie in [0, 1)");
    }
    if (!(spec.lambda > 0.0)) throw ParameterError("gen_inar: lambda must be > 0");
    if (spec.days < 30) throw ParameterError("gen_inar: need at least 30 days");
}

CountSeries run_inar(const InarSpec& spec, const std::array<double, 7>* profile) {
    validate_inar(spec);
    CountSeries out;
    out.start_day = 0;
    std::ostringstream prov;
    prov << "inar(alpha=" << spec.alpha << ", lambda=" << spec.lambda
         << ", seed=" << spec.seed << (profile ? ", weekly" : "") << ")";
    out.provenance = prov.str();
    out.label = "synthetic";
    out.values.reserve(static_cast<std::size_t>(spec.days));

    const double stationary_mean = spec.lambda / (1.0 - spec.alpha);
    Rng init(derive_stream(spec.seed, 0, 0, kInarTag));
    std::int64_t x = init.poisson(stationary_mean);
    out.values.push_back(x);
    for (int day = 1; day < spec.days; ++day) {
        Rng rng(derive_stream(spec.seed, static_cast<std::uint64_t>(day), 0, kInarTag));
        const double lambda =
            profile ? spec.lambda * (*profile)[static_cast<std::size_t>(day % 7)]
                    : spec.lambda;
        x = rng.binomial(x, spec.alpha) + rng.poisson(lambda);
        out.values.push_back(x);
    }
    return out;
}

}  // namespace

CountSeries gen_inar(const InarSpec& spec) { return run_inar(spec, nullptr); }

CountSeries gen_seasonal_inar(const InarSpec& spec,
                              const std::array<double, 7>& weekly_profile) {
    for (double w : weekly_profile) {
        if (!(w > 0.0)) throw ParameterError("gen_seasonal_inar: profile must be positive");
    }
    return run_inar(spec, &weekly_profile);
}

InarSpec inar_high_volume_preset(std::uint64_t seed) {
    // stationary mean 2230, calibration target 2233 daily events
    return InarSpec{0.9, 223.0, 365, seed};
}

InarSpec inar_low_volume_preset(std::uint64_t seed) {
    // stationary mean 184 daily events
    return InarSpec{0.8, 36.8, 365, seed};
}

void validate(const LabelSpec& spec) {
    if (spec.categories.empty()) throw ValidationError("label spec has no categories");
    double total = 0.0;
    for (const CategoryProfile& c : spec.categories) {
        if (c.label.empty()) throw ValidationError("label spec category without label");
        if (!(c.weight > 0.0)) {
            throw ValidationError("category '" + c.label + "' has non-positive weight");
        }
        total += c.weight;
        for (const ScoreProfile& s : c.scores) {
            if (s.min < 0 || s.max > kMaxComponentScore || s.min > s.max ||
                s.mode < s.min || s.mode > s.max) {
                throw ValidationError("category '" + c.label +
                                      "' has an invalid score profile");
            }
        }
    }
    if (!(total > 0.0)) throw ValidationError("label spec weights sum to zero");
}

LabelSpec default_label_spec() {
    auto flat = [](int lo, int hi, int mode) { return ScoreProfile{lo, hi, mode}; };
    LabelSpec spec;
    // Rarest categories score highest; per-component caps keep the total
    // risk score within the observed 0..300 band.
    spec.categories = {
        {"bulk", 0.45, {flat(0, 10, 2), flat(0, 5, 0), flat(0, 40, 15), flat(0, 5, 0)}},
        {"marketing", 0.30, {flat(0, 15, 5), flat(0, 5, 0), flat(5, 50, 20), flat(0, 10, 2)}},
        {"social", 0.15, {flat(0, 20, 8), flat(0, 10, 2), flat(10, 60, 30), flat(0, 15, 5)}},
        {"content_filter", 0.06,
         {flat(5, 40, 20), flat(5, 30, 10), flat(20, 70, 45), flat(5, 30, 15)}},
        {"malicious_url", 0.03,
         {flat(10, 60, 35), flat(20, 75, 50), flat(20, 75, 45), flat(20, 60, 40)}},
        {"virus", 0.01,
         {flat(20, 70, 45), flat(50, 75, 70), flat(30, 75, 60), flat(40, 75, 60)}},
    };
    validate(spec);
    return spec;
}

LabelSpec label_spec_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("label spec JSON: ") + e.what(), 0);
    }
    LabelSpec spec;
    try {
        for (const auto& cat : doc.at("categories")) {
            CategoryProfile profile;
            profile.label = cat.at("label").get<std::string>();
            profile.weight = cat.at("weight").get<double>();
            const auto& scores = cat.at("scores");
            for (int i = 0; i < kNumScoreComponents; ++i) {
                const auto& s = scores.at(kScoreComponentNames[i]);
                profile.scores[static_cast<std::size_t>(i)] =
                    ScoreProfile{s.at("min").get<int>(), s.at("max").get<int>(),
                                 s.at("mode").get<int>()};
            }
            spec.categories.push_back(std::move(profile));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("label spec JSON: ") + e.what());
    }
    validate(spec);
    return spec;
}

std::string to_json(const LabelSpec& spec) {
    nlohmann::json doc;
    doc["categories"] = nlohmann::json::array();
    for (const CategoryProfile& c : spec.categories) {
        nlohmann::json cat;
        cat["label"] = c.label;
        cat["weight"] = c.weight;
        for (int i = 0; i < kNumScoreComponents; ++i) {
            const ScoreProfile& s = c.scores[static_cast<std::size_t>(i)];
            cat["scores"][kScoreComponentNames[i]] = {
                {"min", s.min}, {"max", s.max}, {"mode", s.mode}};
        }
        doc["categories"].push_back(std::move(cat));
    }
    return doc.dump(2);
}

namespace {

// Integer triangular sample on [lo, hi] peaking at mode.
int sample_score(Rng& rng, const ScoreProfile& p) {
    if (p.min == p.max) return p.min;
    const double lo = p.min;
    const double hi = p.max + 1.0;  // continuous envelope, floored below
    const double mode = p.mode + 0.5;
    const double u = rng.uniform();
    const double cut = (mode - lo) / (hi - lo);
    double v;
    if (u < cut) {
        v = lo + std::sqrt(u * (hi - lo) * (mode - lo));
    } else {
        v = hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }
    int s = static_cast<int>(std::floor(v));
    if (s < p.min) s = p.min;
    if (s > p.max) s = p.max;
    return s;
}

}  // namespace

EventLog gen_labeled_log(const CountSeries& series, const LabelSpec& labels,
                         std::uint64_t seed) {
    validate(series);
    validate(labels);
    double total_weight = 0.0;
    for (const CategoryProfile& c : labels.categories) total_weight += c.weight;

    EventLog log;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const int day = series.start_day + static_cast<int>(i);
        for (std::int64_t unit = 0; unit < series.values[i]; ++unit) {
            Rng rng(derive_stream(seed, i, static_cast<std::uint64_t>(unit), kLabelTag));
            double pick = rng.uniform() * total_weight;
            std::size_t chosen = labels.categories.size() - 1;
            for (std::size_t c = 0; c < labels.categories.size(); ++c) {
                pick -= labels.categories[c].weight;
                if (pick < 0.0) {
                    chosen = c;
                    break;
                }
            }
            const CategoryProfile& profile = labels.categories[chosen];
            EventRecord rec;
            rec.day = day;
            rec.category = profile.label;
            for (int s = 0; s < kNumScoreComponents; ++s) {
                rec.scores[static_cast<std::size_t>(s)] =
                    sample_score(rng, profile.scores[static_cast<std::size_t>(s)]);
            }
            log.records.push_back(std::move(rec));
        }
    }
    return log;
}

}  // namespace filtercast
