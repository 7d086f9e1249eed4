#include "zeno/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace zeno {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

const std::vector<std::string_view>& known_keys() {
    static const std::vector<std::string_view> keys = {
        "n_cycles",  "dtheta_override",   "t_empty",           "t_obj_arm", "t_rec",
        "t_qwp",     "r_mirror",          "crosstalk",         "crosstalk_phase_t",
        "crosstalk_phase_r", "phase",     "object",            "object_t",  "object_phase",
        "detector_eff", "filter_t",       "trials",            "seed",
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

class EntryReader {
public:
    explicit EntryReader(std::map<std::string, Entry, std::less<>> entries)
        : entries_(std::move(entries)) {}

    bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }
    int line(std::string_view key) const { return has(key) ? entries_.find(key)->second.line : 0; }

    double real(std::string_view key, double fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        double value = 0.0;
        if (!parse_number(it->second.value, value) || !std::isfinite(value)) {
            throw ConfigError(it->second.line, std::string(key) + ": expected a number, got '" +
                                                   it->second.value + "'");
        }
        return value;
    }

    double probability(std::string_view key, double fallback) const {
        const double value = real(key, fallback);
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ConfigError(line(key), std::string(key) + " must be in [0, 1]");
        }
        return value;
    }

    double open_probability(std::string_view key, double fallback) const {
        const double value = real(key, fallback);
        if (!(value > 0.0 && value <= 1.0)) {
            throw ConfigError(line(key), std::string(key) + " must be in (0, 1]");
        }
        return value;
    }

    std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        std::uint64_t value = 0;
        if (!parse_number(it->second.value, value)) {
            throw ConfigError(it->second.line, std::string(key) +
                                                   ": expected a non-negative integer, got '" +
                                                   it->second.value + "'");
        }
        return value;
    }

    std::string text(std::string_view key, std::string fallback) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

private:
    std::map<std::string, Entry, std::less<>> entries_;
};

std::map<std::string, Entry, std::less<>> tokenize(std::string_view text) {
    std::map<std::string, Entry, std::less<>> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw ConfigError(line_no, "expected 'key = value'");
        }
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(line_no, "unknown key '" + key + "'");
        }
        if (const auto it = entries.find(key); it != entries.end()) {
            throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                           std::to_string(it->second.line) + ")");
        }
        entries.emplace(key, Entry{value, line_no});
    }
    return entries;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

ParsedConfig parse_config(std::string_view text) {
    const EntryReader in(tokenize(text));
    ParsedConfig parsed;
    SystemConfig& sys = parsed.system;
    CycleParams& cycle = sys.cycle;

    const std::uint64_t n = in.unsigned_integer("n_cycles", 1);
    if (n < 1 || n > 1000000) {
        throw ConfigError(in.line("n_cycles"), "n_cycles must be in [1, 1000000]");
    }
    sys.n_cycles = static_cast<int>(n);

    if (in.has("dtheta_override")) {
        const double dtheta = in.real("dtheta_override", 0.0);
        if (!(dtheta > 0.0 && dtheta <= std::numbers::pi / 2)) {
            throw ConfigError(in.line("dtheta_override"), "dtheta_override must be in (0, pi/2]");
        }
        sys.dtheta_override = dtheta;
    }

    cycle.t_empty = in.probability("t_empty", 1.0);
    cycle.t_obj_arm = in.probability("t_obj_arm", 1.0);

    const bool composed = in.has("t_qwp") || in.has("r_mirror");
    if (composed && in.has("t_rec")) {
        const int conflict = std::max({in.line("t_rec"), in.line("t_qwp"), in.line("r_mirror")});
        throw ConfigError(conflict, "t_rec and t_qwp/r_mirror are mutually exclusive");
    }
    if (composed) {
        const double t_qwp = in.probability("t_qwp", 1.0);
        cycle.t_rec = t_qwp * t_qwp * in.probability("r_mirror", 1.0);
    } else {
        cycle.t_rec = in.probability("t_rec", 1.0);
    }

    const double crosstalk = in.real("crosstalk", 0.0);
    if (!(crosstalk >= 0.0 && crosstalk < 0.5)) {
        throw ConfigError(in.line("crosstalk"), "crosstalk must be in [0, 0.5)");
    }
    cycle.pbs = PbsModel(crosstalk,
                         in.real("crosstalk_phase_t", PbsModel::kDefaultTransmitLeakPhase),
                         in.real("crosstalk_phase_r", PbsModel::kDefaultReflectLeakPhase));
    cycle.interferometer_phase = in.real("phase", 0.0);

    const std::string object = in.text("object", "opaque");
    if (object == "partial") {
        if (!in.has("object_t")) {
            throw ConfigError(in.line("object"), "object = partial needs object_t");
        }
        cycle.object = ObjectSpec::partial(in.probability("object_t", 0.0),
                                           in.real("object_phase", 0.0));
    } else if (object == "opaque" || object == "absent") {
        for (const char* key : {"object_t", "object_phase"}) {
            if (in.has(key)) {
                throw ConfigError(in.line(key), std::string(key) + " only applies to object = partial");
            }
        }
        cycle.object = object == "opaque" ? ObjectSpec::opaque() : ObjectSpec::absent();
    } else {
        throw ConfigError(in.line("object"),
                          "object must be absent, opaque or partial, got '" + object + "'");
    }

    sys.detector_eff = in.open_probability("detector_eff", 1.0);
    sys.filter_t = in.open_probability("filter_t", 1.0);

    parsed.trials = in.unsigned_integer("trials", parsed.trials);
    if (parsed.trials < 1) {
        throw ConfigError(in.line("trials"), "trials must be >= 1");
    }
    parsed.seed = in.unsigned_integer("seed", parsed.seed);
    return parsed;
}

ParsedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(0, "cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(e.line(), path.string() + ": " + e.what());
    }
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
    return std::string(buf, ptr);
}

std::string format_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string to_config_text(const ParsedConfig& config) {
    const SystemConfig& sys = config.system;
    const CycleParams& cycle = sys.cycle;
    std::ostringstream out;
    out << "n_cycles = " << sys.n_cycles << '\n';
    if (sys.dtheta_override) {
        out << "dtheta_override = " << format_exact(*sys.dtheta_override) << '\n';
    }
    out << "t_empty = " << format_exact(cycle.t_empty) << '\n'
        << "t_obj_arm = " << format_exact(cycle.t_obj_arm) << '\n'
        << "t_rec = " << format_exact(cycle.t_rec) << '\n'
        << "crosstalk = " << format_exact(cycle.pbs.crosstalk()) << '\n'
        << "crosstalk_phase_t = " << format_exact(cycle.pbs.transmit_leak_phase()) << '\n'
        << "crosstalk_phase_r = " << format_exact(cycle.pbs.reflect_leak_phase()) << '\n'
        << "phase = " << format_exact(cycle.interferometer_phase) << '\n';
    switch (cycle.object.kind()) {
        case ObjectKind::Absent:
            out << "object = absent\n";
            break;
        case ObjectKind::Opaque:
            out << "object = opaque\n";
            break;
        case ObjectKind::Partial:
            out << "object = partial\n"
                << "object_t = " << format_exact(cycle.object.amplitude_transmission()) << '\n'
                << "object_phase = " << format_exact(cycle.object.phase()) << '\n';
            break;
    }
    out << "detector_eff = " << format_exact(sys.detector_eff) << '\n'
        << "filter_t = " << format_exact(sys.filter_t) << '\n'
        << "trials = " << config.trials << '\n'
        << "seed = " << config.seed << '\n';
    return out.str();
}

std::vector<CurveRow> sweep(const SystemConfig& config, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max) {
        throw std::invalid_argument("sweep range must satisfy 1 <= n_min <= n_max");
    }
    std::vector<CurveRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    SystemConfig at = config;
    at.dtheta_override.reset();
    for (int n = n_min; n <= n_max; ++n) {
        at.n_cycles = n;
        rows.push_back({n, run_exact(at)});
    }
    return rows;
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
    out << kCurveHeader << '\n';
    for (const CurveRow& row : rows) {
        const RunOutcome& o = row.outcome;
        out << row.n_cycles << ',' << format_number(o.p_qi) << ',' << format_number(o.p_abs) << ','
            << format_number(o.p_loss) << ',' << format_number(o.p_wrong) << ','
            << format_number(o.eta) << ',' << format_number(o.eta_adjusted) << '\n';
    }
}

std::vector<EfficiencyPoint> parse_efficiency_data(std::string_view text) {
    std::vector<EfficiencyPoint> points;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        EfficiencyPoint p;
        const bool ok = fields.size() == 3 && parse_number(fields[0], p.n_cycles) &&
                        parse_number(fields[1], p.eta) && parse_number(fields[2], p.sigma);
        if (!ok) {
            if (points.empty() && line_no == 1) {
                continue;  // header
            }
            throw ConfigError(line_no, "expected 'N,eta,sigma'");
        }
        points.push_back(p);
    }
    return points;
}

}  // namespace zeno
