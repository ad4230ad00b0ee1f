// Copyright 2026 The noonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noonsim/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace noonsim {

using nlohmann::json;

namespace {

// Best-effort line of the value at `pointer`: follows each object key of the
// pointer through the raw text. Returns 0 when a key cannot be found.
int locate_line(std::string_view text, const std::string &pointer) {
    std::size_t pos = 0;
    std::size_t found = std::string_view::npos;
    std::istringstream tokens(pointer);
    std::string token;
    std::getline(tokens, token, '/');  // leading empty token
    while (std::getline(tokens, token, '/')) {
        if (!token.empty() && std::all_of(token.begin(), token.end(), ::isdigit)) {
            continue;  // array index
        }
        const std::string quoted = "\"" + token + "\"";
        std::size_t at = text.find(quoted, pos);
        while (at != std::string_view::npos) {
            std::size_t after = at + quoted.size();
            while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
            if (after < text.size() && text[after] == ':') break;
            at = text.find(quoted, at + 1);
        }
        if (at == std::string_view::npos) {
            return found == std::string_view::npos ? 0 : static_cast<int>(std::count(text.begin(), text.begin() + found, '\n')) + 1;
        }
        found = at;
        pos = at + quoted.size();
    }
    if (found == std::string_view::npos) return 0;
    return static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(found), '\n')) + 1;
}

class Parser {
   public:
    explicit Parser(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string &pointer, const std::string &message) const {
        throw ConfigError(message, pointer, locate_line(text_, pointer));
    }

    void require_object(const json &j, const std::string &pointer) const {
        if (!j.is_object()) fail(pointer, "expected an object");
    }

    void check_keys(const json &j, const std::string &pointer, std::initializer_list<std::string_view> allowed) const {
        require_object(j, pointer);
        for (const auto &[key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(pointer + "/" + key, "unknown key '" + key + "'");
            }
        }
    }

    double number(const json &j, const std::string &pointer) const {
        if (!j.is_number()) fail(pointer, "expected a number");
        return j.get<double>();
    }

    double angle(const json &j, const std::string &pointer) const {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) {
            try {
                return parse_angle_expression(j.get<std::string>());
            } catch (const ValidationError &e) {
                fail(pointer, e.what());
            }
        }
        fail(pointer, "expected a number or an angle expression such as \"pi/2\"");
    }

    double fraction(const json &j, const std::string &pointer) const {
        const double v = number(j, pointer);
        if (!(v >= 0.0 && v <= 1.0)) fail(pointer, "must lie in [0, 1]");
        return v;
    }

    double non_negative(const json &j, const std::string &pointer) const {
        const double v = number(j, pointer);
        if (!(v >= 0.0)) fail(pointer, "must be >= 0");
        return v;
    }

    double positive(const json &j, const std::string &pointer) const {
        const double v = number(j, pointer);
        if (!(v > 0.0)) fail(pointer, "must be > 0");
        return v;
    }

    std::int64_t integer(const json &j, const std::string &pointer) const {
        if (!j.is_number_integer()) fail(pointer, "expected an integer");
        return j.get<std::int64_t>();
    }

    bool boolean(const json &j, const std::string &pointer) const {
        if (!j.is_boolean()) fail(pointer, "expected true or false");
        return j.get<bool>();
    }

    std::string string(const json &j, const std::string &pointer) const {
        if (!j.is_string()) fail(pointer, "expected a string");
        return j.get<std::string>();
    }

    std::array<double, kDetectorCount> detector_array(const json &j, const std::string &pointer, bool unit) const {
        if (!j.is_array() || j.size() != kDetectorCount) fail(pointer, "expected an array of 4 numbers (a1, a2, b1, b2)");
        std::array<double, kDetectorCount> out{};
        for (int d = 0; d < kDetectorCount; ++d) {
            const std::string at = pointer + "/" + std::to_string(d);
            out[d] = unit ? fraction(j[d], at) : non_negative(j[d], at);
        }
        return out;
    }

    // Keys missing from `j` keep their value from `defaults`; without
    // defaults all three are required.
    LinearRange range(const json &j, const std::string &pointer, bool angles,
                      const std::optional<LinearRange> &defaults) const {
        check_keys(j, pointer, {"start", "stop", "steps"});
        if (!defaults) {
            for (const char *key : {"start", "stop", "steps"}) {
                if (!j.contains(key)) fail(pointer + "/" + key, std::string("missing required key '") + key + "'");
            }
        }
        LinearRange r = defaults.value_or(LinearRange{});
        if (j.contains("start")) {
            r.start = angles ? angle(j["start"], pointer + "/start") : number(j["start"], pointer + "/start");
        }
        if (j.contains("stop")) {
            r.stop = angles ? angle(j["stop"], pointer + "/stop") : number(j["stop"], pointer + "/stop");
        }
        if (j.contains("steps")) {
            const auto steps = integer(j["steps"], pointer + "/steps");
            if (steps < 1 || steps > 1000000) fail(pointer + "/steps", "steps must lie in [1, 1000000]");
            r.steps = static_cast<int>(steps);
        }
        return r;
    }

    void circuit(const json &j, RunConfig &cfg, const std::string &base = "/circuit") const {
        check_keys(j, base, {"mode_count", "elements", "calibration"});
        if (j.contains("mode_count")) {
            const auto m = integer(j["mode_count"], base + "/mode_count");
            if (m != 2) fail(base + "/mode_count", "the chip model has exactly 2 modes");
        }
        cfg.circuit.mode_count = 2;
        if (j.contains("elements")) {
            const json &list = j["elements"];
            if (!list.is_array()) fail(base + "/elements", "expected an array of elements");
            cfg.circuit.elements.clear();
            cfg.theta_elements.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                element(list[i], base + "/elements/" + std::to_string(i), cfg);
            }
        }
        if (j.contains("calibration")) {
            const std::string at = base + "/calibration";
            const json &c = j["calibration"];
            check_keys(c, at, {"phase_offset", "phase_per_milliwatt"});
            ThermoOpticCalibration cal;
            if (c.contains("phase_offset")) cal.phase_offset = angle(c["phase_offset"], at + "/phase_offset");
            if (c.contains("phase_per_milliwatt")) {
                cal.phase_per_milliwatt = number(c["phase_per_milliwatt"], at + "/phase_per_milliwatt");
            }
            if (cal.phase_per_milliwatt == 0.0) fail(at + "/phase_per_milliwatt", "must be nonzero");
            cfg.calibration = cal;
        }
    }

    void element(const json &e, const std::string &at, RunConfig &cfg) const {
        check_keys(e, at, {"kind", "modes", "param"});
        if (!e.contains("kind")) fail(at + "/kind", "missing required key 'kind'");
        if (!e.contains("modes") || !e["modes"].is_array()) fail(at + "/modes", "expected an array of mode indices");
        const std::string kind = string(e["kind"], at + "/kind");
        std::vector<int> modes;
        for (std::size_t k = 0; k < e["modes"].size(); ++k) {
            const auto m = integer(e["modes"][k], at + "/modes/" + std::to_string(k));
            if (m < 0 || m >= 2) fail(at + "/modes/" + std::to_string(k), "mode index must be 0 or 1");
            modes.push_back(static_cast<int>(m));
        }
        const bool has_param = e.contains("param");
        if (kind == "phase_shifter") {
            if (modes.size() != 1) fail(at + "/modes", "a phase shifter acts on exactly one mode");
            double phase = 0.0;
            if (has_param && e["param"].is_string() && e["param"].get<std::string>() == "theta") {
                cfg.theta_elements.push_back(static_cast<int>(cfg.circuit.elements.size()));
            } else if (has_param) {
                phase = angle(e["param"], at + "/param");
            }
            cfg.circuit.elements.emplace_back(PhaseShifter{modes[0], phase});
        } else if (kind == "coupler") {
            if (modes.size() != 2 || modes[0] == modes[1]) {
                fail(at + "/modes", "a coupler acts on two distinct modes");
            }
            const double mixing = has_param ? angle(e["param"], at + "/param") : kBalancedMixing;
            cfg.circuit.elements.emplace_back(Coupler{modes[0], modes[1], mixing});
        } else if (kind == "loss") {
            if (modes.size() != 1) fail(at + "/modes", "a loss element acts on exactly one mode");
            if (!has_param) fail(at + "/param", "loss needs a transmission in [0, 1]");
            cfg.circuit.elements.emplace_back(Loss{modes[0], fraction(e["param"], at + "/param")});
        } else {
            fail(at + "/kind", "unknown element kind '" + kind + "' (phase_shifter, coupler, loss)");
        }
    }

    void source(const json &j, RunConfig &cfg) const {
        const std::string base = "/source";
        check_keys(j, base, {"noon", "spectrum", "rate"});
        if (j.contains("noon")) {
            const json &n = j["noon"];
            const std::string at = base + "/noon";
            check_keys(n, at, {"balance", "phase", "purity"});
            if (n.contains("balance")) cfg.noon.balance = fraction(n["balance"], at + "/balance");
            if (n.contains("phase")) cfg.noon.phase = angle(n["phase"], at + "/phase");
            if (n.contains("purity")) cfg.noon.purity = fraction(n["purity"], at + "/purity");
        }
        if (j.contains("spectrum")) {
            const json &s = j["spectrum"];
            const std::string at = base + "/spectrum";
            check_keys(s, at, {"center_nm", "fwhm_nm", "shape"});
            if (s.contains("center_nm")) cfg.spectrum.center_nm = positive(s["center_nm"], at + "/center_nm");
            if (s.contains("fwhm_nm")) cfg.spectrum.fwhm_nm = positive(s["fwhm_nm"], at + "/fwhm_nm");
            if (s.contains("shape")) {
                try {
                    cfg.spectrum.shape = parse_spectral_shape(string(s["shape"], at + "/shape"));
                } catch (const ConfigError &) {
                    throw;
                } catch (const ValidationError &e) {
                    fail(at + "/shape", e.what());
                }
            }
        }
        if (j.contains("rate")) {
            const json &r = j["rate"];
            const std::string at = base + "/rate";
            check_keys(r, at, {"brightness", "pump_mw"});
            if (r.contains("brightness")) cfg.rate.brightness = non_negative(r["brightness"], at + "/brightness");
            if (r.contains("pump_mw")) cfg.rate.pump_mw = non_negative(r["pump_mw"], at + "/pump_mw");
        }
    }

    LossBreakdown breakdown(const json &j, const std::string &at) const {
        check_keys(j, at, {"grating_coupler_db", "long_pass_filter_db", "fiber_splitter_db", "detector_db"});
        LossBreakdown b;
        if (j.contains("grating_coupler_db")) b.grating_coupler_db = non_negative(j["grating_coupler_db"], at + "/grating_coupler_db");
        if (j.contains("long_pass_filter_db")) b.long_pass_filter_db = non_negative(j["long_pass_filter_db"], at + "/long_pass_filter_db");
        if (j.contains("fiber_splitter_db")) b.fiber_splitter_db = non_negative(j["fiber_splitter_db"], at + "/fiber_splitter_db");
        if (j.contains("detector_db")) b.detector_db = non_negative(j["detector_db"], at + "/detector_db");
        return b;
    }

    void detection(const json &j, RunConfig &cfg) const {
        const std::string base = "/detection";
        check_keys(j, base,
                   {"loss", "apply_output_loss", "efficiencies", "dark_counts_cps", "hom_visibility",
                    "detected_pairs_per_s"});
        if (j.contains("loss")) {
            const json &l = j["loss"];
            const std::string at = base + "/loss";
            check_keys(l, at, {"a", "b", "both"});
            if (l.contains("both")) {
                if (l.contains("a") || l.contains("b")) fail(at + "/both", "'both' excludes per-mode 'a'/'b' entries");
                cfg.loss.mode_a = cfg.loss.mode_b = breakdown(l["both"], at + "/both");
            }
            if (l.contains("a")) cfg.loss.mode_a = breakdown(l["a"], at + "/a");
            if (l.contains("b")) cfg.loss.mode_b = breakdown(l["b"], at + "/b");
        }
        if (j.contains("apply_output_loss")) cfg.apply_output_loss = boolean(j["apply_output_loss"], base + "/apply_output_loss");
        if (j.contains("efficiencies")) cfg.efficiencies = detector_array(j["efficiencies"], base + "/efficiencies", true);
        if (j.contains("dark_counts_cps")) {
            cfg.dark_counts_cps = detector_array(j["dark_counts_cps"], base + "/dark_counts_cps", false);
        }
        if (j.contains("hom_visibility")) cfg.hom_visibility = fraction(j["hom_visibility"], base + "/hom_visibility");
        if (j.contains("detected_pairs_per_s")) {
            cfg.detected_pairs_per_s = non_negative(j["detected_pairs_per_s"], base + "/detected_pairs_per_s");
        }
    }

    void scan(const json &j, RunConfig &cfg) const {
        const std::string base = "/scan";
        check_keys(j, base, {"theta", "phi", "power_mw", "delay_fs", "visibility_theta"});
        if (j.contains("theta")) cfg.theta = range(j["theta"], base + "/theta", true, cfg.theta);
        if (j.contains("phi")) cfg.phi = range(j["phi"], base + "/phi", true, cfg.phi);
        if (j.contains("power_mw")) {
            cfg.power_mw = range(j["power_mw"], base + "/power_mw", false, std::nullopt);
            if (cfg.power_mw->start < 0.0 || cfg.power_mw->stop < 0.0) {
                fail(base + "/power_mw", "electrical power must be >= 0");
            }
        }
        if (j.contains("delay_fs")) {
            const json &d = j["delay_fs"];
            const std::string at = base + "/delay_fs";
            check_keys(d, at, {"start", "stop", "step"});
            if (d.contains("start")) cfg.delay_min_fs = number(d["start"], at + "/start");
            if (d.contains("stop")) cfg.delay_max_fs = number(d["stop"], at + "/stop");
            if (d.contains("step")) cfg.delay_step_fs = positive(d["step"], at + "/step");
            if (cfg.delay_max_fs < cfg.delay_min_fs) fail(at + "/stop", "stop must be >= start");
        }
        if (j.contains("visibility_theta")) cfg.visibility_theta = angle(j["visibility_theta"], base + "/visibility_theta");
    }

    void tagsim(const json &j, RunConfig &cfg) const {
        const std::string base = "/tagsim";
        check_keys(j, base, {"pair_rate", "duration_s", "jitter_ps", "window_ps", "seed", "theta", "format", "sweep_phi"});
        auto &t = cfg.tagsim;
        if (j.contains("pair_rate")) t.pair_rate = non_negative(j["pair_rate"], base + "/pair_rate");
        if (j.contains("duration_s")) t.duration_s = positive(j["duration_s"], base + "/duration_s");
        if (j.contains("jitter_ps")) t.jitter_ps = non_negative(j["jitter_ps"], base + "/jitter_ps");
        if (j.contains("window_ps")) {
            t.window_ps = integer(j["window_ps"], base + "/window_ps");
            if (t.window_ps <= 0) fail(base + "/window_ps", "must be > 0");
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) fail(base + "/seed", "seed must be a non-negative integer");
            t.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("theta")) t.theta = angle(j["theta"], base + "/theta");
        if (j.contains("format")) {
            t.format = string(j["format"], base + "/format");
            if (t.format != "csv" && t.format != "binary") fail(base + "/format", "format must be \"csv\" or \"binary\"");
        }
        if (j.contains("sweep_phi")) t.sweep_phi = boolean(j["sweep_phi"], base + "/sweep_phi");
    }

    void output(const json &j, RunConfig &cfg) const {
        check_keys(j, "/output", {"dir"});
        if (j.contains("dir")) cfg.output_dir = string(j["dir"], "/output/dir");
    }

   private:
    std::string_view text_;
};

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double parse_plain(std::string_view s, std::string_view whole) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError("cannot parse angle '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

ConfigError::ConfigError(std::string message, std::string pointer, int line)
    : ValidationError(pointer + (line > 0 ? " (line " + std::to_string(line) + ")" : "") + ": " + message),
      detail_(std::move(message)),
      pointer_(std::move(pointer)),
      line_(line) {}

std::string ConfigError::to_json() const {
    json j = {{"error", "config"}, {"message", detail_}, {"path", pointer_}};
    j["line"] = line_ > 0 ? json(line_) : json(nullptr);
    return j.dump();
}

std::vector<double> LinearRange::values() const {
    std::vector<double> out;
    out.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        out.push_back(steps == 1 ? start : start + (stop - start) * static_cast<double>(i) / (steps - 1));
    }
    return out;
}

double parse_angle_expression(std::string_view text) {
    const std::string s = trim(text);
    const auto pi_at = s.find("pi");
    if (pi_at == std::string::npos) {
        return parse_plain(s, text);
    }
    // [sign][coef '*'] pi ['/' denom]
    std::string head = trim(std::string_view(s).substr(0, pi_at));
    std::string tail = trim(std::string_view(s).substr(pi_at + 2));
    double coef = 1.0;
    if (!head.empty()) {
        if (head == "-") {
            coef = -1.0;
        } else if (head == "+") {
            coef = 1.0;
        } else {
            if (head.back() != '*') throw ValidationError("cannot parse angle '" + std::string(text) + "'");
            head.pop_back();
            coef = parse_plain(head, text);
        }
    }
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') throw ValidationError("cannot parse angle '" + std::string(text) + "'");
        denom = parse_plain(std::string_view(tail).substr(1), text);
        if (denom == 0.0) throw ValidationError("division by zero in angle '" + std::string(text) + "'");
    }
    return coef * std::numbers::pi / denom;
}

CircuitSpec RunConfig::circuit_at(double theta) const {
    CircuitSpec spec = circuit;
    for (int index : theta_elements) {
        std::get<PhaseShifter>(spec.elements[index]).phase = theta;
    }
    return spec;
}

FringeGridOptions RunConfig::fringe_options(int threads) const {
    FringeGridOptions options;
    options.noon = noon;
    options.circuit = circuit;
    options.theta_elements = theta_elements;
    if (apply_output_loss) {
        options.transmissions = {loss.eta_a(), loss.eta_b()};
    }
    options.threads = threads;
    return options;
}

namespace {

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        // nlohmann reports "... at line L, column C: ..."
        int line = 0;
        const std::string what = e.what();
        if (const auto at = what.find("line "); at != std::string::npos) {
            line = std::atoi(what.c_str() + at + 5);
        }
        throw ConfigError(std::string("JSON syntax error: ") + e.what(), "", line);
    }
}

std::string read_text(const std::filesystem::path &path, const char *what) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(std::string("cannot read ") + what + " " + path.string(), "", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

void apply_circuit_document(RunConfig &config, std::string_view text) {
    const json doc = parse_document(text);
    Parser(text).circuit(doc, config, "");
}

RunConfig parse_run_config(std::string_view text) {
    const json doc = parse_document(text);
    Parser p(text);
    p.check_keys(doc, "", {"circuit", "source", "detection", "scan", "tagsim", "output"});

    RunConfig cfg;
    const FringeGridOptions ideal = ideal_mzi_options();
    cfg.circuit = ideal.circuit;
    cfg.theta_elements = ideal.theta_elements;
    if (doc.contains("circuit")) p.circuit(doc["circuit"], cfg);
    if (doc.contains("source")) p.source(doc["source"], cfg);
    if (doc.contains("detection")) p.detection(doc["detection"], cfg);
    if (doc.contains("scan")) p.scan(doc["scan"], cfg);
    if (doc.contains("tagsim")) p.tagsim(doc["tagsim"], cfg);
    if (doc.contains("output")) p.output(doc["output"], cfg);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    return parse_run_config(read_text(path, "config file"));
}

RunConfig load_run_config(const std::filesystem::path &path, const std::filesystem::path &circuit_path) {
    RunConfig config = load_run_config(path);
    apply_circuit_document(config, read_text(circuit_path, "circuit file"));
    return config;
}

}  // namespace noonsim
