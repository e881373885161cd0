#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "stedi/partition.hpp"
#include "stedi/sts_io.hpp"

namespace stedi {

/// Flat key=value config ('#' comments, blank lines ignored). Unknown keys
/// are errors so typos fail loudly. See README for the key list.
inline EmbedConfig parse_config(std::istream& in, EmbedConfig base = {}) {
  EmbedConfig cfg = base;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos || raw[start] == '#') continue;
    std::size_t eq = raw.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, "expected key=value");
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(raw.substr(0, eq));
    const std::string val = trim(raw.substr(eq + 1));
    auto as_double = [&]() {
      std::istringstream vs(val);
      double d;
      if (!(vs >> d)) throw ParseError(line_no, "bad number for " + key);
      return d;
    };
    auto as_u64 = [&]() {
      std::istringstream vs(val);
      std::uint64_t u;
      if (!(vs >> u)) throw ParseError(line_no, "bad integer for " + key);
      return u;
    };
    auto as_bool = [&]() {
      if (val == "true" || val == "1") return true;
      if (val == "false" || val == "0") return false;
      throw ParseError(line_no, "bad bool for " + key);
    };

    if (key == "mu") cfg.mu = as_double();
    else if (key == "mode") {
      if (val == "practical") cfg.mode = Mode::practical;
      else if (val == "paper_strict") cfg.mode = Mode::paper_strict;
      else throw ParseError(line_no, "mode must be practical or paper_strict");
    }
    else if (key == "eps") cfg.eps = as_double();
    else if (key == "delta") cfg.delta = as_double();
    else if (key == "rho") cfg.rho = as_double();
    else if (key == "K") cfg.K = as_double();
    else if (key == "p0") cfg.p0 = as_double();
    else if (key == "gamma_margin") cfg.gamma_margin = as_double();
    else if (key == "tol_mult") cfg.tol_mult = as_double();
    else if (key == "e_exceptional_frac") cfg.e_exceptional_frac = as_double();
    else if (key == "coverage_threshold") cfg.coverage_threshold = as_double();
    else if (key == "max_resamples")
      cfg.max_resamples = static_cast<std::uint32_t>(as_u64());
    else if (key == "max_pipeline_retries")
      cfg.max_pipeline_retries = static_cast<std::uint32_t>(as_u64());
    else if (key == "seed") cfg.seed = as_u64();
    else if (key == "matcher") {
      if (val == "greedy") cfg.matcher = MatcherKind::greedy;
      else if (val == "nibble") cfg.matcher = MatcherKind::nibble;
      else throw ParseError(line_no, "matcher must be greedy or nibble");
    }
    else if (key == "bite") cfg.bite = as_double();
    else if (key == "check_a") cfg.check_a = as_bool();
    else if (key == "check_b") cfg.check_b = as_bool();
    else if (key == "check_c") cfg.check_c = as_bool();
    else if (key == "check_d") cfg.check_d = as_bool();
    else if (key == "check_e") cfg.check_e = as_bool();
    else if (key == "disable_fast_path") cfg.disable_fast_path = as_bool();
    else if (key == "verify_intermediate") cfg.verify_intermediate = as_bool();
    else throw ParseError(line_no, "unknown key '" + key + "'");
  }
  return cfg;
}

inline EmbedConfig load_config(const std::string& path, EmbedConfig base = {}) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return parse_config(f, base);
}

}  // namespace stedi
