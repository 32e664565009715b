#pragma once

// Model configuration document: one `key = value` pair per line, `#` starts a
// comment. Keys: c1, c2, lambda, alpha, q. Missing keys keep the reference
// values (alpha=2, c1=4, c2=3, lambda=1, q=0.1).

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "twodiv/model.hpp"

namespace twodiv {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ModelParams parse_model_config(std::istream& in, const std::string& source = "<config>");

ModelParams load_model_config(const std::string& path);

}  // namespace twodiv
