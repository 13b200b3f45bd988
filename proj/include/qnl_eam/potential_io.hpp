#pragma once

#include <string>

#include "qnl_eam/keyvalue.hpp"
#include "qnl_eam/potential.hpp"

namespace qnl_eam {

/// Reads a potential definition. Recognized keys: name, family.pair (morse|none),
/// family.density (exponential|none), family.embedding (quadratic|none), alpha,
/// beta, c0, c1. Any other key is an error.
inline PotentialParameters parse_potential(const std::vector<kv::Entry>& entries) {
  PotentialParameters p;
  for (const kv::Entry& e : entries) {
    if (e.key == "name") {
      p.name = e.value;
    } else if (e.key == "family.pair") {
      if (e.value == "morse") p.pair = PairFamily::Morse;
      else if (e.value == "none") p.pair = PairFamily::None;
      else throw ParseError("family.pair: unknown family '" + e.value + "'", e.line);
    } else if (e.key == "family.density") {
      if (e.value == "exponential") p.density = DensityFamily::Exponential;
      else if (e.value == "none") p.density = DensityFamily::None;
      else throw ParseError("family.density: unknown family '" + e.value + "'", e.line);
    } else if (e.key == "family.embedding") {
      if (e.value == "quadratic") p.embedding = EmbeddingFamily::Quadratic;
      else if (e.value == "none") p.embedding = EmbeddingFamily::None;
      else throw ParseError("family.embedding: unknown family '" + e.value + "'", e.line);
    } else if (e.key == "alpha") {
      p.alpha = kv::to_double(e);
    } else if (e.key == "beta") {
      p.beta = kv::to_double(e);
    } else if (e.key == "c0") {
      p.c0 = kv::to_double(e);
    } else if (e.key == "c1") {
      p.c1 = kv::to_double(e);
    } else {
      throw ParseError("unknown key '" + e.key + "'", e.line);
    }
  }
  return p;
}

inline PotentialParameters load_potential_file(const std::string& path) {
  return parse_potential(kv::parse_file(path));
}

inline std::string format_potential(const PotentialParameters& p) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string s;
  s += "name = " + p.name + "\n";
  s += std::string("family.pair = ") + (p.pair == PairFamily::Morse ? "morse" : "none") + "\n";
  s += std::string("family.density = ") +
       (p.density == DensityFamily::Exponential ? "exponential" : "none") + "\n";
  s += std::string("family.embedding = ") +
       (p.embedding == EmbeddingFamily::Quadratic ? "quadratic" : "none") + "\n";
  s += "alpha = " + num(p.alpha) + "\n";
  s += "beta = " + num(p.beta) + "\n";
  s += "c0 = " + num(p.c0) + "\n";
  s += "c1 = " + num(p.c1) + "\n";
  return s;
}

}  // namespace qnl_eam
