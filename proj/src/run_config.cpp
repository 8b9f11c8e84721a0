#include "qlc/run_config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qlc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& name, int /*line*/, const std::string& key,
                 const std::string& v) {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size())
        throw std::runtime_error(name + ": bad numeric value for " + key + ": " + v);
    return x;
}

struct SectionReader {
    const std::map<std::string, std::string>* kv;
    const std::string* file;

    bool has(const std::string& key) const { return kv && kv->count(key) > 0; }
    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return to_double(*file, 0, key, kv->at(key));
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? kv->at(key) : fallback;
    }
    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = kv->at(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::runtime_error(*file + ": bad boolean for " + key + ": " + v);
    }
};

}  // namespace

RunConfig parse_run_config_text(const std::string& text, const std::string& name) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(name, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(name, lineno, "empty section name");
            cfg.raw[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(name, lineno, "empty key");
        if (section.empty()) fail(name, lineno, "key outside any section");
        if (cfg.raw[section].count(key))
            fail(name, lineno, "duplicate key " + section + "." + key);
        cfg.raw[section][key] = value;
    }

    auto section_of = [&](const std::string& s) -> SectionReader {
        auto it = cfg.raw.find(s);
        return {it == cfg.raw.end() ? nullptr : &it->second, &name};
    };

    const SectionReader mat = section_of("material");
    const double a = mat.number("a", 1.0);
    const double b = mat.number("b", 1.0);
    const double c = mat.number("c", 1.0);
    cfg.material = MaterialConstants::make(a, b, c);  // s_plus always recomputed

    const bool have_elastic = cfg.raw.count("elastic") > 0;
    const bool have_frank = cfg.raw.count("frank") > 0;
    if (have_elastic == have_frank)
        throw std::runtime_error(name + ": exactly one of [elastic] or [frank] required");
    cfg.elastic_given = have_elastic;
    if (have_elastic) {
        const SectionReader el = section_of("elastic");
        cfg.elastic = {el.number("L1", 1.0), el.number("L2", 0.0), el.number("L3", 0.0),
                       el.number("L4", 0.0)};
        cfg.frank = elastic_to_frank(cfg.elastic, cfg.material.s_plus);
    } else {
        const SectionReader fr = section_of("frank");
        cfg.frank = {fr.number("k1", 1.0), fr.number("k2", 1.0), fr.number("k3", 1.0),
                     fr.number("k4", 0.0)};
        cfg.elastic = frank_to_elastic(cfg.frank, cfg.material.s_plus);
    }

    const SectionReader run = section_of("run");
    cfg.density_kind = density_kind_from_name(run.text("density_kind", "new_plus"));
    cfg.seed = static_cast<std::uint64_t>(run.number("seed", 42));
    cfg.samples = static_cast<int>(run.number("samples", 10000));
    if (cfg.samples < 0) throw std::runtime_error(name + ": samples must be >= 0");
    cfg.identity_tol = run.number("identity_tol", 1e-9);
    cfg.negative_control = run.flag("negative_control", false);

    const SectionReader grid = section_of("grid");
    cfg.dims = {static_cast<int>(grid.number("nx", 9)),
                static_cast<int>(grid.number("ny", 9)),
                static_cast<int>(grid.number("nz", 9))};
    cfg.h = grid.number("h", 0.45);
    if (cfg.dims.nx < 3 || cfg.dims.ny < 3 || cfg.dims.nz < 3 || !(cfg.h > 0.0))
        throw std::runtime_error(name + ": grid needs nx,ny,nz >= 3 and h > 0");

    const SectionReader bnd = section_of("boundary");
    cfg.scenario = bnd.text("scenario", "hedgehog");
    if (cfg.scenario != "hedgehog" && cfg.scenario != "constant")
        throw std::runtime_error(name + ": unknown boundary scenario " + cfg.scenario);

    const SectionReader sol = section_of("solver");
    cfg.L_list.clear();
    if (sol.has("L_list")) {
        std::istringstream ls(sol.kv->at("L_list"));
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) cfg.L_list.push_back(to_double(name, 0, "L_list", tok));
        }
    } else {
        cfg.L_list.push_back(sol.number("L", 0.1));
    }
    if (cfg.L_list.empty()) throw std::runtime_error(name + ": empty L list");
    for (std::size_t i = 0; i < cfg.L_list.size(); ++i) {
        if (!(cfg.L_list[i] > 0.0))
            throw std::runtime_error(name + ": relaxation parameters must be positive");
        if (i > 0 && !(cfg.L_list[i] < cfg.L_list[i - 1]))
            throw std::runtime_error(name + ": L_list must be strictly decreasing");
    }
    cfg.max_iters = static_cast<int>(sol.number("max_iters", 200000));
    cfg.grad_tol = sol.number("grad_tol", 0.0);
    cfg.cutoff_M = sol.number("cutoff_M", 0.0);
    cfg.resume_from = sol.text("resume_from", "");
    cfg.allow_noncoercive = sol.flag("allow_noncoercive", false);

    const SectionReader out = section_of("output");
    cfg.out_dir = out.text("out_dir", ".");
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str(), path);
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream out;
    for (const auto& [section, kv] : cfg.raw) {
        out << "[" << section << "]\n";
        for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
        out << "\n";
    }
    return out.str();
}

SolverConfig make_solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.material = cfg.material;
    sc.L = cfg.L_list.front();
    sc.max_iters = cfg.max_iters;
    sc.grad_tol = cfg.resolved_grad_tol();
    sc.allow_noncoercive = cfg.allow_noncoercive;
    sc.density.kind = cfg.density_kind;
    sc.density.L = cfg.elastic;
    sc.density.hat = frank_to_hat(cfg.frank, cfg.material.s_plus);
    sc.density.s_plus = cfg.material.s_plus;
    if (cfg.density_kind == DensityKind::ModifiedCutoff) {
        sc.density.cutoff_M = cfg.resolved_cutoff_M();
        Rng rng(cfg.seed);
        const int probes = std::min(cfg.samples > 0 ? cfg.samples : 500, 2000);
        const CoercivityReport rep =
            estimate_alpha(cfg.elastic, cfg.material.s_plus, probes, rng);
        sc.density.alpha = rep.alpha;
    }
    return sc;
}

QField make_scenario_field(const RunConfig& cfg) {
    if (cfg.scenario == "hedgehog")
        return make_hedgehog_field(cfg.dims, cfg.h, cfg.material);
    return make_constant_field(cfg.dims, cfg.h,
                               from_director({0, 0, 1}, cfg.material.s_plus));
}

}  // namespace qlc
