#include "grid.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qrem/error.hpp"

namespace qrem::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

double to_real(const std::string& s, const std::string& name) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument(name + ": '" + s + "' is not a finite number");
  }
  return v;
}

int to_int(const std::string& s, const std::string& name) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument(name + ": '" + s + "' is not an integer");
  }
  return v;
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text, const std::string& name) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw InvalidArgument(name + ": empty entry in '" + text + "'");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(to_real(item, name));
    } else if (parts.size() == 3) {
      const double a = to_real(parts[0], name);
      const double b = to_real(parts[1], name);
      const int count = to_int(parts[2], name);
      if (count < 1) throw InvalidArgument(name + ": range needs a positive count");
      if (count == 1) {
        out.push_back(a);
        continue;
      }
      for (int i = 0; i < count; ++i) {
        out.push_back(i + 1 == count ? b : a + (b - a) * i / (count - 1));
      }
    } else {
      throw InvalidArgument(name + ": '" + item + "' is neither a value nor start:stop:count");
    }
  }
  if (out.empty()) throw InvalidArgument(name + " must not be empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& name) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw InvalidArgument(name + ": empty entry in '" + text + "'");
    out.push_back(to_int(item, name));
  }
  if (out.empty()) throw InvalidArgument(name + " must not be empty");
  return out;
}

std::vector<int> parse_p_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item == "inf") {
      out.push_back(0);
      continue;
    }
    const int p = to_int(item, "p");
    if (p < 2) throw InvalidArgument("p: interaction order must be at least 2 (or inf)");
    out.push_back(p);
  }
  if (out.empty()) throw InvalidArgument("p must not be empty");
  return out;
}

}  // namespace qrem::cli
