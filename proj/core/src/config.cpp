#include "tasac/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tasac/csv.hpp"
#include "tasac/errors.hpp"

namespace tasac {

void ExperimentSpec::validate() const {
    if (seeds.empty()) throw config_error("experiment: seeds must be non-empty");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) throw config_error("experiment: seeds must be distinct");
    if (episodes == 0) throw config_error("experiment: episodes must be > 0");
    if (averaging_window == 0 || averaging_window > episodes)
        throw config_error("experiment: averaging_window must be in [1, episodes]");
    env.validate();
    hyper.validate();
}

std::size_t default_window_for(Scenario s) {
    return s == Scenario::MeasurementNoise ? 20 : 10;
}

ExperimentSpec default_experiment(Scenario scenario, Algorithm algorithm,
                                  SelectionStrategy strategy) {
    ExperimentSpec spec;
    spec.scenario = scenario;
    spec.algorithm = algorithm;
    spec.strategy = strategy;
    spec.averaging_window = default_window_for(scenario);
    spec.env.scenario = scenario;
    return spec;
}

ExperimentSpec desk_preset(Scenario scenario, Algorithm algorithm, SelectionStrategy strategy) {
    ExperimentSpec spec = default_experiment(scenario, algorithm, strategy);
    spec.seeds = {1, 2, 3};
    spec.episodes = 40;
    spec.averaging_window = 5;
    spec.hyper.hidden = {64, 64};
    return spec;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const auto x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("config: bad boolean value for " + key + ": '" + v + "'");
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

ConfigSections parse_config_sections(std::istream& is) {
    ConfigSections sections;
    std::string line;
    std::string current;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw config_error("config line " + std::to_string(line_no) + ": bad section header");
            current = trim(t.substr(1, t.size() - 2));
            sections.emplace_back(current, std::vector<std::pair<std::string, std::string>>{});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        if (current.empty())
            throw config_error("config line " + std::to_string(line_no) + ": key outside a section");
        sections.back().second.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return sections;
}

std::string to_config_text(const ExperimentSpec& spec) {
    std::ostringstream os;
    os << "# tasac experiment configuration\n";
    os << "# time unit: minutes; temperatures: kelvin; concentrations: mol/L\n\n";

    os << "[experiment]\n";
    os << "scenario = " << to_string(spec.scenario) << "\n";
    os << "algorithm = " << to_string(spec.algorithm) << "\n";
    os << "strategy = " << to_string(spec.strategy) << "\n";
    os << "seeds = " << join_u64(spec.seeds) << "\n";
    os << "episodes = " << spec.episodes << "\n";
    os << "averaging_window = " << spec.averaging_window << "\n\n";

    const Hyperparameters& h = spec.hyper;
    os << "[agent]\n";
    os << "gamma = " << csv_double(h.gamma) << "\n";
    os << "batch_size = " << h.batch_size << "\n";
    os << "lr_actor = " << csv_double(h.lr_actor) << "\n";
    os << "lr_critic = " << csv_double(h.lr_critic) << "\n";
    os << "lr_entropy = " << csv_double(h.lr_entropy) << "\n";
    os << "tau = " << csv_double(h.tau) << "\n";
    os << "target_entropy = " << csv_double(h.target_entropy) << "\n";
    os << "hidden = " << join_sizes(h.hidden) << "\n";
    os << "replay_capacity = " << h.replay_capacity << "\n";
    os << "grad_clip_norm = " << csv_double(h.grad_clip_norm) << "\n";
    os << "initial_log_alpha = " << csv_double(h.initial_log_alpha) << "\n";
    os << "shared_noise = " << (h.shared_noise ? "true" : "false") << "\n";
    os << "select_outer_argmax = " << (h.select_outer_argmax ? "true" : "false") << "\n\n";

    const EnvConfig& e = spec.env;
    os << "[env]\n";
    os << "t_ref = " << csv_double(e.t_ref) << "\n";
    os << "batch_duration = " << csv_double(e.batch_duration) << "\n";
    os << "control_interval = " << csv_double(e.control_interval) << "\n";
    os << "rk4_substeps = " << e.rk4_substeps << "\n";
    os << "t_jacket_in_min = " << csv_double(e.t_jacket_in_min) << "\n";
    os << "t_jacket_in_max = " << csv_double(e.t_jacket_in_max) << "\n";
    os << "noise_fraction = " << csv_double(e.noise_fraction) << "\n";
    os << "btbv_fraction = " << csv_double(e.btbv_fraction) << "\n\n";

    const ReactorState& s = e.initial_state;
    os << "[initial_state]\n";
    os << "conc_tg = " << csv_double(s.conc_tg) << "\n";
    os << "conc_dg = " << csv_double(s.conc_dg) << "\n";
    os << "conc_mg = " << csv_double(s.conc_mg) << "\n";
    os << "conc_e = " << csv_double(s.conc_e) << "\n";
    os << "conc_a = " << csv_double(s.conc_a) << "\n";
    os << "conc_gl = " << csv_double(s.conc_gl) << "\n";
    os << "t_reactor = " << csv_double(s.t_reactor) << "\n";
    os << "t_jacket = " << csv_double(s.t_jacket) << "\n\n";

    const KineticParams& k = e.kinetics;
    os << "[kinetics]\n";
    for (std::size_t i = 0; i < 6; ++i)
        os << "ko" << i + 1 << " = " << csv_double(k.ko[i]) << "\n";
    for (std::size_t i = 0; i < 6; ++i)
        os << "e" << i + 1 << " = " << csv_double(k.activation_energy[i]) << "\n";
    os << "gas_constant = " << csv_double(k.gas_constant) << "\n\n";

    const ThermalParams& t = e.thermal;
    os << "[thermal]\n";
    os << "molar_mass = " << csv_double(t.molar_mass) << "\n";
    os << "volume = " << csv_double(t.volume) << "\n";
    os << "density = " << csv_double(t.density) << "\n";
    os << "heat_capacity = " << csv_double(t.heat_capacity) << "\n";
    os << "heat_of_reaction = " << csv_double(t.heat_of_reaction) << "\n";
    os << "jacket_flow = " << csv_double(t.jacket_flow) << "\n";
    os << "jacket_volume = " << csv_double(t.jacket_volume) << "\n";
    os << "jacket_density = " << csv_double(t.jacket_density) << "\n";
    os << "coolant_heat_capacity = " << csv_double(t.coolant_heat_capacity) << "\n";
    os << "ua = " << csv_double(t.ua) << "\n";
    return os.str();
}

ExperimentSpec spec_from_config_text(const std::string& text) {
    std::istringstream is(text);
    const ConfigSections sections = parse_config_sections(is);
    ExperimentSpec spec;
    bool window_set = false;

    for (const auto& [section, kvs] : sections) {
        for (const auto& [key, value] : kvs) {
            if (section == "experiment") {
                if (key == "scenario") spec.scenario = scenario_from_string(value);
                else if (key == "algorithm") spec.algorithm = algorithm_from_string(value);
                else if (key == "strategy") spec.strategy = strategy_from_string(value);
                else if (key == "seeds") {
                    spec.seeds.clear();
                    for (const auto& s : split(value, ',')) spec.seeds.push_back(to_u64(key, s));
                } else if (key == "episodes") spec.episodes = to_u64(key, value);
                else if (key == "averaging_window") {
                    spec.averaging_window = to_u64(key, value);
                    window_set = true;
                } else throw config_error("config: unknown key [experiment] " + key);
            } else if (section == "agent") {
                Hyperparameters& h = spec.hyper;
                if (key == "gamma") h.gamma = to_double(key, value);
                else if (key == "batch_size") h.batch_size = to_u64(key, value);
                else if (key == "lr_actor") h.lr_actor = to_double(key, value);
                else if (key == "lr_critic") h.lr_critic = to_double(key, value);
                else if (key == "lr_entropy") h.lr_entropy = to_double(key, value);
                else if (key == "tau") h.tau = to_double(key, value);
                else if (key == "target_entropy") h.target_entropy = to_double(key, value);
                else if (key == "hidden") {
                    h.hidden.clear();
                    for (const auto& s : split(value, ',')) h.hidden.push_back(to_u64(key, s));
                } else if (key == "replay_capacity") h.replay_capacity = to_u64(key, value);
                else if (key == "grad_clip_norm") h.grad_clip_norm = to_double(key, value);
                else if (key == "initial_log_alpha") h.initial_log_alpha = to_double(key, value);
                else if (key == "shared_noise") h.shared_noise = to_bool(key, value);
                else if (key == "select_outer_argmax") h.select_outer_argmax = to_bool(key, value);
                else throw config_error("config: unknown key [agent] " + key);
            } else if (section == "env") {
                EnvConfig& e = spec.env;
                if (key == "t_ref") e.t_ref = to_double(key, value);
                else if (key == "batch_duration") e.batch_duration = to_double(key, value);
                else if (key == "control_interval") e.control_interval = to_double(key, value);
                else if (key == "rk4_substeps") e.rk4_substeps = to_u64(key, value);
                else if (key == "t_jacket_in_min") e.t_jacket_in_min = to_double(key, value);
                else if (key == "t_jacket_in_max") e.t_jacket_in_max = to_double(key, value);
                else if (key == "noise_fraction") e.noise_fraction = to_double(key, value);
                else if (key == "btbv_fraction") e.btbv_fraction = to_double(key, value);
                else throw config_error("config: unknown key [env] " + key);
            } else if (section == "initial_state") {
                ReactorState& s = spec.env.initial_state;
                if (key == "conc_tg") s.conc_tg = to_double(key, value);
                else if (key == "conc_dg") s.conc_dg = to_double(key, value);
                else if (key == "conc_mg") s.conc_mg = to_double(key, value);
                else if (key == "conc_e") s.conc_e = to_double(key, value);
                else if (key == "conc_a") s.conc_a = to_double(key, value);
                else if (key == "conc_gl") s.conc_gl = to_double(key, value);
                else if (key == "t_reactor") s.t_reactor = to_double(key, value);
                else if (key == "t_jacket") s.t_jacket = to_double(key, value);
                else throw config_error("config: unknown key [initial_state] " + key);
            } else if (section == "kinetics") {
                KineticParams& k = spec.env.kinetics;
                if (key.size() == 3 && key.rfind("ko", 0) == 0 && key[2] >= '1' && key[2] <= '6')
                    k.ko[key[2] - '1'] = to_double(key, value);
                else if (key.size() == 2 && key[0] == 'e' && key[1] >= '1' && key[1] <= '6')
                    k.activation_energy[key[1] - '1'] = to_double(key, value);
                else if (key == "gas_constant") k.gas_constant = to_double(key, value);
                else throw config_error("config: unknown key [kinetics] " + key);
            } else if (section == "thermal") {
                ThermalParams& t = spec.env.thermal;
                if (key == "molar_mass") t.molar_mass = to_double(key, value);
                else if (key == "volume") t.volume = to_double(key, value);
                else if (key == "density") t.density = to_double(key, value);
                else if (key == "heat_capacity") t.heat_capacity = to_double(key, value);
                else if (key == "heat_of_reaction") t.heat_of_reaction = to_double(key, value);
                else if (key == "jacket_flow") t.jacket_flow = to_double(key, value);
                else if (key == "jacket_volume") t.jacket_volume = to_double(key, value);
                else if (key == "jacket_density") t.jacket_density = to_double(key, value);
                else if (key == "coolant_heat_capacity") t.coolant_heat_capacity = to_double(key, value);
                else if (key == "ua") t.ua = to_double(key, value);
                else throw config_error("config: unknown key [thermal] " + key);
            } else {
                throw config_error("config: unknown section [" + section + "]");
            }
        }
    }
    if (!window_set) spec.averaging_window = default_window_for(spec.scenario);
    spec.env.scenario = spec.scenario;
    spec.validate();
    return spec;
}

ExperimentSpec load_spec_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return spec_from_config_text(ss.str());
}

std::string config_hash(const std::string& config_text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : config_text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tasac
