#include "hjb/config.hpp"
#include "hjb/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hjb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct KvStore {
    std::map<std::string, std::string> entries;  // "section.key" or "key"
    std::set<std::string> consumed;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string take_string(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) throw ConfigError("missing required key `" + key + "`");
        consumed.insert(key);
        std::string v = it->second;
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        return v;
    }

    double take_number(const std::string& key) {
        const std::string raw = take_string(key);
        try {
            size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key `" + key + "` has non-numeric value `" + raw + "`");
        }
    }

    double take_number_or(const std::string& key, double fallback) {
        return has(key) ? take_number(key) : fallback;
    }

    void reject_unconsumed() const {
        for (const auto& [k, v] : entries)
            if (!consumed.count(k)) throw ConfigError("unknown key `" + k + "`");
    }
};

KvStore tokenize(const std::string& text) {
    KvStore store;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed table header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty table name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (store.entries.count(full))
            throw ConfigError("duplicate key `" + full + "`");
        store.entries[full] = val;
    }
    return store;
}

} // namespace

ModelConfig parse_model_config(const std::string& text) {
    KvStore kv = tokenize(text);
    ModelConfig out;
    out.source_text = text;

    const double rho = kv.take_number("rho");
    const std::string family = kv.take_string("model.family");

    ModelSpec model;
    if (family == "log_ak") {
        model = make_log_ak(kv.take_number("model.gamma"), rho);
    } else if (family == "ak_crra") {
        model = make_ak_crra(kv.take_number("model.gamma"), kv.take_number("model.theta"), rho);
    } else if (family == "rck_cobb_douglas") {
        model = make_rck_cobb_douglas(kv.take_number("model.alpha"),
                                      kv.take_number_or("model.d", 0.0),
                                      kv.take_number_or("model.theta", 1.0), rho);
    } else if (family == "linear_counterexample") {
        model = make_linear_counterexample(rho);
    } else if (family == "custom") {
        throw ConfigError("family `custom` requires programmatic oracles; use the library API");
    } else {
        throw ConfigError("unknown model family `" + family + "`");
    }

    const double k_lo = kv.take_number("grid.k_lo");
    const double k_hi = kv.take_number("grid.k_hi");
    out.grid_n = int(kv.take_number("grid.n"));
    if (out.grid_n < 2) throw ConfigError("grid.n must be at least 2");
    const double c_cap = kv.take_number_or("policy.c_cap", 0.0);
    out.model = with_domain(std::move(model), k_lo, k_hi, c_cap);

    if (kv.has("assumption6.k_star")) {
        Assumption6Params a6;
        a6.k_star = kv.take_number("assumption6.k_star");
        a6.k_plus = kv.take_number("assumption6.k_plus");
        a6.c_star = kv.take_number("assumption6.c_star");
        a6.gamma = kv.take_number("assumption6.gamma");
        a6.delta = kv.take_number("assumption6.delta");
        a6.theta = kv.take_number("assumption6.theta");
        a6.a = kv.take_number("assumption6.a");
        a6.b = kv.take_number("assumption6.b");
        a6.cc = kv.take_number("assumption6.cc");
        out.a6 = a6;
    }

    kv.reject_unconsumed();
    return out;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

} // namespace hjb
