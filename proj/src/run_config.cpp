#include "plad/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>

#include "plad/errors.hpp"
#include "plad/field.hpp"
#include "plad/rng.hpp"

namespace plad {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    fail(ErrorCode::ConfigError, "config: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(path, "expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) bad(path, "unknown key \"" + item.key() + "\"");
    }
}

const json& child(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) bad(path, std::string("missing required key \"") + key + "\"");
    return *it;
}

double num_at(const json& j, const char* key, const std::string& path) {
    const json& v = child(j, key, path);
    if (!v.is_number()) bad(path, std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) bad(path, std::string("\"") + key + "\" must be a number");
    return it->get<double>();
}

long long int_at(const json& j, const char* key, const std::string& path) {
    const json& v = child(j, key, path);
    if (!v.is_number_integer()) bad(path, std::string("\"") + key + "\" must be an integer");
    return v.get<long long>();
}

long long int_or(const json& j, const char* key, long long fallback, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) bad(path, std::string("\"") + key + "\" must be an integer");
    return it->get<long long>();
}

std::string str_or(const json& j, const char* key, const std::string& fallback, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) bad(path, std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
}

std::array<double, 2> point_at(const json& j, const char* key, int d, const std::string& path,
                               std::array<double, 2> fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_array() || static_cast<int>(it->size()) != d)
        bad(path, std::string("\"") + key + "\" must be an array of " + std::to_string(d) + " numbers");
    std::array<double, 2> out = fallback;
    for (int a = 0; a < d; ++a) {
        if (!(*it)[static_cast<std::size_t>(a)].is_number()) bad(path, std::string("\"") + key + "\" must be numeric");
        out[static_cast<std::size_t>(a)] = (*it)[static_cast<std::size_t>(a)].get<double>();
    }
    return out;
}

// Key checking stays with the caller: a top-level "gaussian" initial block
// carries its "type" tag in the same object as the component fields.
GaussianComponent parse_component(const json& j, int d, const std::string& path) {
    GaussianComponent c;
    c.center = point_at(j, "center", d, path, {0.0, 0.0});
    c.sigma = num_or(j, "sigma", 1.0, path);
    c.mass = num_or(j, "mass", 1.0, path);
    return c;
}

Profile parse_initial(const json& j, int d, std::uint64_t seed, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const json& tv = child(j, "type", path);
    if (!tv.is_string()) bad(path, "\"type\" must be a string");
    const std::string type = tv.get<std::string>();
    if (type == "gaussian") {
        check_keys(j, path, {"type", "center", "sigma", "mass"});
        GaussianMixture m;
        m.components.push_back(parse_component(j, d, path));
        return m;
    }
    if (type == "mixture") {
        check_keys(j, path, {"type", "components"});
        const json& comps = child(j, "components", path);
        if (!comps.is_array() || comps.empty()) bad(path, "\"components\" must be a non-empty array");
        GaussianMixture m;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string cpath = path + ".components[" + std::to_string(i) + "]";
            if (!comps[i].is_object()) bad(cpath, "expected an object");
            check_keys(comps[i], cpath, {"center", "sigma", "mass"});
            m.components.push_back(parse_component(comps[i], d, cpath));
        }
        return m;
    }
    if (type == "indicator") {
        check_keys(j, path, {"type", "lo", "hi", "mass"});
        IndicatorProfile box;
        box.lo = point_at(j, "lo", d, path, {-1.0, -1.0});
        box.hi = point_at(j, "hi", d, path, {1.0, 1.0});
        box.mass = num_or(j, "mass", 1.0, path);
        return box;
    }
    if (type == "ring") {
        check_keys(j, path, {"type", "radius", "width", "mass"});
        RingProfile ring;
        ring.radius = num_or(j, "radius", 1.0, path);
        ring.width = num_or(j, "width", 0.25, path);
        ring.mass = num_or(j, "mass", 1.0, path);
        return ring;
    }
    if (type == "random_mixture") {
        check_keys(j, path, {"type"});
        CounterRng rng{seed, 0};
        return random_gaussian_mixture(rng, d);
    }
    bad(path, "unknown initial type \"" + type + "\"");
}

}  // namespace

std::string config_hash(const nlohmann::json& doc) {
    const std::string dump = doc.dump();  // objects are key-sorted, so this is canonical
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunSetup parse_run_config(const nlohmann::json& doc) {
    check_keys(doc, "$", {"params", "grid", "kernel", "initial", "rescale_mass", "time", "solver", "output", "seed"});

    const json& jp = child(doc, "params", "$");
    check_keys(jp, "$.params", {"d", "p", "alpha", "lambda"});
    const int d = static_cast<int>(int_at(jp, "d", "$.params"));
    const double p = num_at(jp, "p", "$.params");
    const double lambda = num_at(jp, "lambda", "$.params");
    RunSetup setup;
    if (lambda == 0.0) {
        setup.config.params = p_heat_params(d, p);  // alpha, if present, is ignored
    } else {
        setup.config.params = validate(d, p, num_at(jp, "alpha", "$.params"), lambda);
    }

    const json& jg = child(doc, "grid", "$");
    check_keys(jg, "$.grid", {"n", "half_width"});
    setup.config.grid =
        make_grid(d, static_cast<int>(int_at(jg, "n", "$.grid")), num_at(jg, "half_width", "$.grid"));

    if (auto it = doc.find("kernel"); it != doc.end()) {
        check_keys(*it, "$.kernel", {"eps"});
        setup.config.kernel_eps = num_at(*it, "eps", "$.kernel");
        if (!(setup.config.kernel_eps > 0.0)) bad("$.kernel", "\"eps\" must be positive");
    }

    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) bad("$", "\"seed\" must be a non-negative integer");
        setup.seed = it->get<std::uint64_t>();
    }

    const json& jt = child(doc, "time", "$");
    check_keys(jt, "$.time", {"t_end", "cfl", "dt_min", "dt_cap"});
    setup.config.t_end = num_at(jt, "t_end", "$.time");
    setup.config.cfl = num_or(jt, "cfl", setup.config.cfl, "$.time");
    setup.config.dt_min = num_or(jt, "dt_min", setup.config.dt_min, "$.time");
    setup.config.dt_cap = num_or(jt, "dt_cap", setup.config.dt_cap, "$.time");

    if (auto it = doc.find("solver"); it != doc.end()) {
        check_keys(*it, "$.solver", {"delta", "rho_max", "diag_every", "moment_k"});
        setup.config.delta = num_or(*it, "delta", setup.config.delta, "$.solver");
        setup.config.rho_max = num_or(*it, "rho_max", setup.config.rho_max, "$.solver");
        setup.config.diag_every = static_cast<int>(int_or(*it, "diag_every", setup.config.diag_every, "$.solver"));
        setup.config.moment_k = num_or(*it, "moment_k", setup.config.moment_k, "$.solver");
    }

    if (auto it = doc.find("output"); it != doc.end()) {
        check_keys(*it, "$.output", {"trajectory_csv", "summary_json", "snapshot_times", "snapshot_prefix"});
        setup.trajectory_csv = str_or(*it, "trajectory_csv", "", "$.output");
        setup.summary_json = str_or(*it, "summary_json", "", "$.output");
        setup.snapshot_prefix = str_or(*it, "snapshot_prefix", "", "$.output");
        if (auto st = it->find("snapshot_times"); st != it->end()) {
            if (!st->is_array()) bad("$.output", "\"snapshot_times\" must be an array of numbers");
            for (const auto& v : *st) {
                if (!v.is_number()) bad("$.output", "\"snapshot_times\" must be an array of numbers");
                setup.config.snapshot_times.push_back(v.get<double>());
            }
        }
    }

    setup.initial = discretize(parse_initial(child(doc, "initial", "$"), d, setup.seed, "$.initial"),
                               setup.config.grid);

    if (auto it = doc.find("rescale_mass"); it != doc.end()) {
        if (it->is_number()) {
            rescale_to_mass(setup.initial, it->get<double>());
        } else if (it->is_object()) {
            check_keys(*it, "$.rescale_mass", {"multiplier_of_critical"});
            const double mult = num_at(*it, "multiplier_of_critical", "$.rescale_mass");
            if (!(mult > 0.0)) bad("$.rescale_mass", "multiplier must be positive");
            rescale_to_mass(setup.initial, mult * critical_mass(setup.config.params).m_c);
        } else {
            bad("$.rescale_mass", "must be a number or {\"multiplier_of_critical\": x}");
        }
    }

    setup.config_hash = config_hash(doc);
    return setup;
}

RunSetup load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigError, "config: JSON parse error in " + path + ": " + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace plad
