#include "twodiv/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace twodiv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ModelParams parse_model_config(std::istream& in, const std::string& source) {
    ModelParams p = reference_params();
    double alpha = p.alpha();
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        std::ostringstream os;
        os << source << ":" << lineno << ": " << msg;
        throw ConfigError(os.str());
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
        if (ec != std::errc() || ptr != val.data() + val.size() || val.empty())
            fail("value for '" + key + "' is not a number: '" + val + "'");
        if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
        if (key == "c1") p.c1 = x;
        else if (key == "c2") p.c2 = x;
        else if (key == "lambda") p.lambda = x;
        else if (key == "alpha") alpha = x;
        else if (key == "q") p.q = x;
        else fail("unknown key '" + key + "' (expected c1, c2, lambda, alpha, q)");
    }
    p.claims = ClaimDistribution::exponential(alpha);
    return p;
}

ModelParams load_model_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    return parse_model_config(f, path);
}

}  // namespace twodiv
