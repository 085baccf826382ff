#include "qdarwin/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>

namespace qdarwin::cli {

namespace {

using nlohmann::json;

class Locator {
public:
    Locator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const auto pos = key.empty() ? std::string::npos : text_.find('"' + key + '"');
        if (pos == std::string::npos) throw ConfigError(source_ + ": " + message);
        throw ConfigError(source_ + ":" + std::to_string(line_at(pos)) + ": " + message);
    }

    [[nodiscard]] std::size_t line_at(std::size_t byte) const {
        byte = std::min(byte, text_.size());
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    }

    [[nodiscard]] const std::string& source() const { return source_; }

private:
    const std::string& text_;
    std::string source_;
};

double number(const json& obj, const std::string& key, const Locator& loc) {
    const auto& v = obj.at(key);
    if (!v.is_number()) loc.fail(key, "'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) loc.fail(key, "'" + key + "' must be finite");
    return x;
}

std::size_t count(const json& obj, const std::string& key, const Locator& loc) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) loc.fail(key, "'" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& key, const Locator& loc) {
    const auto& v = obj.at(key);
    if (!v.is_string()) loc.fail(key, "'" + key + "' must be a string");
    return v.get<std::string>();
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where, const Locator& loc) {
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) loc.fail(k, "unknown key '" + k + "' in " + where);
    }
}

json parse(const std::string& raw, const Locator& loc) {
    const bool blank = std::all_of(raw.begin(), raw.end(), [](unsigned char c) { return std::isspace(c); });
    if (blank) return json::object();
    try {
        json doc = json::parse(raw);
        if (!doc.is_object()) throw ConfigError(loc.source() + ":1: config must be a JSON object");
        return doc;
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw ConfigError(loc.source() + ":" + std::to_string(loc.line_at(e.byte == 0 ? 0 : e.byte - 1)) + ": " + msg);
    }
}

void apply_overrides(json& doc, const Overrides& o, const Locator& loc) {
    if (o.gamma && o.angle) throw ConfigError("--gamma and --angle are mutually exclusive");
    if (o.p1) doc["p1"] = *o.p1;
    if (o.gamma || o.angle || o.env_size) {
        json comps = doc.contains("components") ? doc["components"] : json::object();
        if (!comps.is_object()) loc.fail("components", "'components' must be an object");
        if (o.env_size) {
            if (comps.contains("gammas")) throw ConfigError("--env-size cannot resize an explicit 'gammas' list");
            comps["count"] = *o.env_size;
        }
        if (o.gamma || o.angle) {
            comps.erase("gamma");
            comps.erase("angle");
            if (comps.contains("gammas")) {
                if (!comps.contains("count")) comps["count"] = comps["gammas"].size();
                comps.erase("gammas");
            }
            if (o.gamma) comps["gamma"] = *o.gamma;
            else comps["angle"] = *o.angle;
        }
        doc["components"] = comps;
    }
    if (o.frag_max) doc["fragment_sizes"] = json{{"from", 1}, {"to", *o.frag_max}};
    if (!o.deltas.empty()) doc["deltas"] = o.deltas;
    if (o.mode) doc["mode"] = *o.mode;
    if (o.format) doc["format"] = *o.format;
    if (o.output) doc["output"] = *o.output;
}

void read_components(const json& doc, SweepConfig& cfg, const Locator& loc) {
    if (!doc.contains("components")) loc.fail("", "missing 'components' (or --gamma/--angle with --env-size)");
    const json& c = doc.at("components");
    if (!c.is_object()) loc.fail("components", "'components' must be an object");
    only_keys(c, {"gamma", "angle", "gammas", "count"}, "'components'", loc);
    const int given = static_cast<int>(c.contains("gamma")) + static_cast<int>(c.contains("angle")) +
                      static_cast<int>(c.contains("gammas"));
    if (given != 1) loc.fail("components", "'components' needs exactly one of 'gamma', 'angle', 'gammas'");

    if (c.contains("gammas")) {
        if (c.contains("count")) loc.fail("count", "'count' is implied by the 'gammas' list");
        const json& list = c.at("gammas");
        if (!list.is_array() || list.empty()) loc.fail("gammas", "'gammas' must be a non-empty array");
        cfg.homogeneous = false;
        for (const auto& g : list) {
            if (!g.is_number()) loc.fail("gammas", "'gammas' entries must be numbers");
            const double v = g.get<double>();
            if (!(v >= 0.0 && v <= 1.0)) loc.fail("gammas", "'gammas' entries must lie in [0, 1]");
            cfg.gammas.push_back(v);
            cfg.angles.push_back(std::asin(v));
        }
        return;
    }
    if (!c.contains("count")) loc.fail("components", "'components' needs 'count' (or --env-size)");
    const std::size_t n = count(c, "count", loc);
    if (n == 0) loc.fail("count", "'count' must be at least 1");
    double gamma = 0.0, angle = 0.0;
    if (c.contains("gamma")) {
        gamma = number(c, "gamma", loc);
        if (!(gamma >= 0.0 && gamma <= 1.0)) loc.fail("gamma", "'gamma' must lie in [0, 1]");
        angle = std::asin(gamma);
    } else {
        angle = number(c, "angle", loc);
        gamma = std::abs(std::sin(angle));
    }
    cfg.gammas.assign(n, gamma);
    cfg.angles.assign(n, angle);
}

void read_fragments(const json& doc, SweepConfig& cfg, const Locator& loc) {
    if (!doc.contains("fragment_sizes")) {
        for (std::size_t f = 1; f <= cfg.env_size(); ++f) cfg.fragment_sizes.push_back(f);
        return;
    }
    const json& fs = doc.at("fragment_sizes");
    if (fs.is_array()) {
        for (const auto& v : fs) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                loc.fail("fragment_sizes", "'fragment_sizes' entries must be non-negative integers");
            }
            cfg.fragment_sizes.push_back(v.get<std::size_t>());
        }
    } else if (fs.is_object()) {
        only_keys(fs, {"from", "to"}, "'fragment_sizes'", loc);
        if (!fs.contains("from") || !fs.contains("to")) loc.fail("fragment_sizes", "'fragment_sizes' range needs 'from' and 'to'");
        const std::size_t from = count(fs, "from", loc), to = count(fs, "to", loc);
        if (to < from) loc.fail("fragment_sizes", "'fragment_sizes' range is empty");
        for (std::size_t f = from; f <= to; ++f) cfg.fragment_sizes.push_back(f);
    } else {
        loc.fail("fragment_sizes", "'fragment_sizes' must be an array or a {from, to} range");
    }
    if (cfg.fragment_sizes.empty()) loc.fail("fragment_sizes", "'fragment_sizes' is empty");
    for (auto f : cfg.fragment_sizes) {
        if (f > cfg.env_size()) {
            loc.fail("fragment_sizes", "fragment size " + std::to_string(f) + " exceeds the environment size " +
                                           std::to_string(cfg.env_size()));
        }
    }
}

}  // namespace

std::vector<double> SweepConfig::gamma_sq() const {
    std::vector<double> out;
    out.reserve(gammas.size());
    for (double g : gammas) out.push_back(g * g);
    return out;
}

std::string SweepConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : document.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SweepConfig load_config(const std::string& raw, const std::string& source, const Overrides& overrides) {
    const Locator loc(raw, source);
    json doc = parse(raw, loc);
    apply_overrides(doc, overrides, loc);
    only_keys(doc,
              {"p1", "components", "fragment_sizes", "deltas", "threshold", "mode", "format", "output", "fit_window",
               "grid_resolution", "curve_file"},
              "config", loc);

    SweepConfig cfg;
    if (!doc.contains("p1")) loc.fail("", "missing 'p1'");
    cfg.p1 = number(doc, "p1", loc);
    if (!(cfg.p1 >= 0.0 && cfg.p1 <= 1.0)) loc.fail("p1", "'p1' must lie in [0, 1]");

    read_components(doc, cfg, loc);
    read_fragments(doc, cfg, loc);

    if (doc.contains("deltas")) {
        const json& ds = doc.at("deltas");
        if (!ds.is_array()) loc.fail("deltas", "'deltas' must be an array");
        for (const auto& d : ds) {
            if (!d.is_number()) loc.fail("deltas", "'deltas' entries must be numbers");
            const double v = d.get<double>();
            if (!(v > 0.0 && v < 1.0)) loc.fail("deltas", "'deltas' entries must lie in (0, 1)");
            cfg.deltas.push_back(v);
        }
    }
    if (doc.contains("threshold")) {
        const auto t = text(doc, "threshold", loc);
        if (t == "linear") cfg.threshold = ThresholdMode::Linear;
        else if (t == "entropic") cfg.threshold = ThresholdMode::Entropic;
        else loc.fail("threshold", "'threshold' must be \"linear\" or \"entropic\"");
    }
    if (doc.contains("mode")) {
        const auto m = text(doc, "mode", loc);
        if (m == "closed-form") cfg.mode = Mode::ClosedForm;
        else if (m == "numeric") cfg.mode = Mode::Numeric;
        else if (m == "oracle") cfg.mode = Mode::Oracle;
        else loc.fail("mode", "'mode' must be \"closed-form\", \"numeric\" or \"oracle\"");
    }
    if (doc.contains("format")) {
        const auto f = text(doc, "format", loc);
        if (f == "csv") cfg.format = Format::Csv;
        else if (f == "json") cfg.format = Format::Json;
        else loc.fail("format", "'format' must be \"csv\" or \"json\"");
    }
    if (doc.contains("output")) cfg.output = text(doc, "output", loc);
    if (doc.contains("curve_file")) cfg.curve_file = text(doc, "curve_file", loc);
    if (doc.contains("grid_resolution")) {
        cfg.grid_resolution = count(doc, "grid_resolution", loc);
        if (cfg.grid_resolution < 8) loc.fail("grid_resolution", "'grid_resolution' must be at least 8");
    }
    if (doc.contains("fit_window")) {
        const json& w = doc.at("fit_window");
        if (!w.is_object() || !w.contains("first") || !w.contains("last")) {
            loc.fail("fit_window", "'fit_window' must be an object with 'first' and 'last'");
        }
        only_keys(w, {"first", "last"}, "'fit_window'", loc);
        const FitWindow win{count(w, "first", loc), count(w, "last", loc)};
        if (win.last <= win.first) loc.fail("fit_window", "'fit_window' needs last > first");
        cfg.fit_window = win;
    }

    // The output path does not change the data, so it stays out of the hash.
    doc.erase("output");
    cfg.document = std::move(doc);
    return cfg;
}

}  // namespace qdarwin::cli
