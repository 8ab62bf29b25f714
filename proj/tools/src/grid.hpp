#pragma once

// Parsing of list-valued options: "0.5,1,2", linear ranges "0:2:5"
// (start:stop:count, endpoints included) and the token "inf" for p.

#include <string>
#include <vector>

namespace qrem::cli {

std::vector<double> parse_real_grid(const std::string& text, const std::string& name);
std::vector<int> parse_int_list(const std::string& text, const std::string& name);

// Interaction orders; "inf" selects the random energy model and maps to 0.
std::vector<int> parse_p_list(const std::string& text);

}  // namespace qrem::cli
