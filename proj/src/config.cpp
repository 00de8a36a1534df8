#include "trilin/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace trilin {

namespace pt = boost::property_tree;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemmas",   "support",  "integral",    "fv",       "calculF",
                                              "lemmeV3",  "equivariance", "no-vt", "theorems", "eigen"};
  return names;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

namespace {

std::string char_key(const std::string& name, int p) { return name + "@" + std::to_string(p); }

FiniteCharacter ramified_default(int p) {
  // Quadratic character of conductor 1 (odd p) or 2 (p = 2).
  if (p == 2) return FiniteCharacter(2, {Rational(1, 2), Rational(0)});
  return FiniteCharacter(p, {Rational(1, 2)});
}

CaseSpec make_spec(std::string name, int p, FiniteCharacter a, FiniteCharacter b, FiniteCharacter c,
                   FiniteCharacter d, V3Spec v3, FiniteCharacter e, FiniteCharacter f) {
  CaseSpec s;
  s.name = std::move(name);
  s.p = p;
  s.mu1 = std::move(a);
  s.mu1p = std::move(b);
  s.mu2 = std::move(c);
  s.mu2p = std::move(d);
  s.v3 = v3;
  s.fin3 = std::move(e);
  s.fin3p = std::move(f);
  return s;
}

Rational parse_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw ConfigError("not a rational number: '" + s + "'");
  }
}

int parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + s + "'");
  }
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

V3Spec parse_v3(const std::string& s) {
  if (s == "principal_series") return V3Spec::PrincipalSeries;
  if (s == "steinberg") return V3Spec::Steinberg;
  if (s == "simple_iso") return V3Spec::SimpleIso;
  if (s == "simple_steinberg") return V3Spec::SimpleSteinberg;
  throw ConfigError("unknown v3 kind '" + s + "'");
}

}  // namespace

SuiteConfig default_config() {
  SuiteConfig c;
  for (int p : {2, 3, 5}) {
    c.characters[char_key("trivial", p)] = FiniteCharacter::trivial(p);
    c.characters[char_key("quadratic", p)] = ramified_default(p);
  }
  c.characters[char_key("quartic", 5)] = FiniteCharacter(5, {Rational(1, 4)});
  const FiniteCharacter T3 = FiniteCharacter::trivial(3), E3 = ramified_default(3);
  const FiniteCharacter T5 = FiniteCharacter::trivial(5), E5 = ramified_default(5);
  const FiniteCharacter Q5(5, {Rational(1, 4)});
  using V = V3Spec;
  auto& k = c.cases;
  k.push_back(make_spec("unram-unram-n3-2", 3, T3, T3, T3, T3, V::PrincipalSeries, E3, E3));
  k.push_back(make_spec("unram-unram-steinberg", 3, T3, T3, T3, T3, V::Steinberg, T3, T3));
  k.push_back(make_spec("unram-unram-n3-2-p5", 5, T5, T5, T5, T5, V::PrincipalSeries, Q5, Q5.inverse()));
  k.push_back(make_spec("both-ramified-n3-0", 3, T3, E3, E3, T3, V::PrincipalSeries, T3, T3));
  k.push_back(make_spec("both-ramified-n3-2", 3, T3, E3, E3, T3, V::PrincipalSeries, E3, E3));
  k.push_back(make_spec("v1-unram-n2-eq-n3", 3, T3, T3, E3, T3, V::PrincipalSeries, E3, T3));
  k.push_back(make_spec("v2-unram-n1-eq-n3", 3, T3, E3, T3, T3, V::PrincipalSeries, E3, T3));
  k.push_back(make_spec("v1-unram-n2-lt-n3", 5, T5, T5, E5, T5, V::PrincipalSeries, Q5, Q5));
  k.push_back(make_spec("v2-unram-n1-lt-n3", 5, T5, E5, T5, T5, V::PrincipalSeries, Q5, Q5));
  k.push_back(make_spec("simple-iso-ramified", 3, T3, E3, E3, T3, V::SimpleIso, T3, T3));
  {
    CaseSpec s = make_spec("simple-iso-swapped", 3, T3, E3, E3, T3, V::SimpleIso, T3, T3);
    s.swap = true;
    k.push_back(s);
  }
  k.push_back(make_spec("simple-steinberg", 3, T3, T3, T3, T3, V::SimpleSteinberg, T3, T3));
  k.push_back(make_spec("simple-unramified", 3, T3, T3, T3, T3, V::SimpleIso, T3, T3));
  k.push_back(make_spec("all-unramified", 3, T3, T3, T3, T3, V::PrincipalSeries, T3, T3));
  k.push_back(make_spec("mu1-ramified", 3, E3, T3, T3, T3, V::PrincipalSeries, E3, T3));
  k.push_back(make_spec("mu2p-ramified", 3, T3, T3, T3, E3, V::PrincipalSeries, E3, T3));
  k.push_back(make_spec("mu1-mu2p-ramified", 3, E3, T3, T3, E3, V::PrincipalSeries, T3, T3));
  k.push_back(make_spec("mu1-ramified-p5", 5, E5, T5, T5, T5, V::PrincipalSeries, E5, T5));
  k.push_back(make_spec("mu1-ramified-simple", 3, E3, T3, T3, T3, V::SimpleIso, T3, T3));
  k.push_back(make_spec("mu2p-ramified-simple", 3, T3, T3, T3, E3, V::SimpleIso, T3, T3));
  return c;
}

SuiteConfig parse_config_text(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  SuiteConfig c;
  c.cases.clear();
  for (int p : {2, 3, 5}) c.characters[char_key("trivial", p)] = FiniteCharacter::trivial(p);

  std::set<std::string> known_sections{"context", "suite"};
  auto get = [](const pt::ptree& sec, const std::string& key) -> std::optional<std::string> {
    if (auto v = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return unquote(*v);
    return std::nullopt;
  };

  if (auto ctx = tree.get_child_optional(pt::ptree::path_type("context", '\0'))) {
    for (const auto& [key, node] : *ctx) {
      const std::string v = unquote(node.data());
      if (key == "primes") {
        c.primes.clear();
        for (const auto& s : split_list(v)) c.primes.push_back(parse_int(key, s));
      } else if (key == "level") {
        c.level = parse_int(key, v);
      } else if (key == "backend") {
        if (v == "exact") c.backend = Backend::Exact;
        else if (v == "numeric") c.backend = Backend::Numeric;
        else throw ConfigError("backend must be exact or numeric");
      } else if (key == "tol") {
        c.tol = parse_double(key, v);
      } else if (key == "nonzero_tol") {
        c.nonzero_tol = parse_double(key, v);
      } else if (key == "rel_tol") {
        c.rel_tol = parse_double(key, v);
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(key, v));
      } else if (key == "samples") {
        c.samples = parse_int(key, v);
      } else if (key == "jobs") {
        c.jobs = parse_int(key, v);
      } else {
        throw ConfigError("unknown key context." + key);
      }
    }
  }
  if (auto s = tree.get_child_optional(pt::ptree::path_type("suite", '\0'))) {
    for (const auto& [key, node] : *s) {
      const std::string v = unquote(node.data());
      if (key == "select") c.suites = split_list(v);
      else if (key == "json") c.json_path = v;
      else if (key == "markdown") c.markdown_path = v;
      else if (key == "cache_dir") c.cache_dir = v;
      else if (key == "cache") c.use_cache = parse_bool(key, v);
      else if (key == "timings") c.timings = parse_bool(key, v);
      else throw ConfigError("unknown key suite." + key);
    }
  }
  // Characters first, so cases can refer to them in any order.
  for (const auto& [section, node] : tree) {
    if (section.rfind("characters.", 0) != 0) continue;
    const std::string name = section.substr(11);
    auto p = get(node, "p");
    auto images = get(node, "images");
    if (!p || !images) throw ConfigError(section + ": needs p and images");
    const int pp = parse_int(section + ".p", *p);
    std::vector<Rational> im;
    for (const auto& s : split_list(*images)) im.push_back(parse_rational(s));
    FiniteCharacter ch;
    try {
      ch = FiniteCharacter(pp, im);
    } catch (const std::exception& e) {
      throw ConfigError(section + ": " + e.what());
    }
    if (auto cond = get(node, "conductor"); cond && parse_int(section + ".conductor", *cond) != ch.conductor())
      throw ConfigError(section + ": declared conductor " + *cond + " but the images give " +
                        std::to_string(ch.conductor()));
    c.characters[char_key(name, pp)] = ch;
  }
  for (const auto& [section, node] : tree) {
    if (section.rfind("characters.", 0) == 0) continue;
    if (section.rfind("case.", 0) != 0) {
      if (!known_sections.count(section)) throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    CaseSpec s;
    s.name = section.substr(5);
    auto p = get(node, "p");
    if (!p) throw ConfigError(section + ": needs p");
    s.p = parse_int(section + ".p", *p);
    auto chr = [&](const std::string& key) {
      const std::string name = get(node, key).value_or("trivial");
      auto it = c.characters.find(char_key(name, s.p));
      if (it == c.characters.end())
        throw ConfigError(section + "." + key + ": unknown character '" + name + "' at p = " + std::to_string(s.p));
      return it->second;
    };
    s.mu1 = chr("mu1");
    s.mu1p = chr("mu1p");
    s.mu2 = chr("mu2");
    s.mu2p = chr("mu2p");
    s.v3 = parse_v3(get(node, "v3").value_or("principal_series"));
    if (s.v3 == V3Spec::Steinberg) {
      s.fin3 = chr("eta");
    } else {
      s.fin3 = chr("mu3");
      s.fin3p = chr("mu3p");
    }
    if (auto v = get(node, "swap")) s.swap = parse_bool(section + ".swap", *v);
    if (auto v = get(node, "x")) s.x = parse_int(section + ".x", *v);
    if (auto v = get(node, "y")) s.y = parse_int(section + ".y", *v);
    if (auto v = get(node, "z")) s.z = parse_int(section + ".z", *v);
    for (const auto& [key, ignored] : node) {
      static const std::set<std::string> keys{"p",  "mu1", "mu1p", "mu2", "mu2p", "v3", "mu3",
                                              "mu3p", "eta", "swap", "x",   "y",    "z"};
      if (!keys.count(key)) throw ConfigError("unknown key " + section + "." + key);
    }
    c.cases.push_back(std::move(s));
  }
  if (c.cases.empty()) c.cases = default_config().cases;
  return c;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

int required_level(const SuiteConfig&) {
  // Conductors up to 2 and gamma exponents up to level - 1 (at least 3).
  return 4;
}

void validate(const SuiteConfig& c) {
  if (c.primes.empty()) throw ConfigError("no primes selected");
  for (int p : c.primes)
    if (p != 2 && p != 3 && p != 5) throw ConfigError("primes must lie in {2, 3, 5}, got " + std::to_string(p));
  if (c.level < required_level(c) || c.level > 5)
    throw ConfigError("level must lie in [" + std::to_string(required_level(c)) + ", 5]");
  if (!(c.tol > 0) || !(c.nonzero_tol > 0) || !(c.rel_tol > 0)) throw ConfigError("tolerances must be positive");
  if (c.nonzero_tol <= c.tol) throw ConfigError("nonzero_tol must exceed tol");
  if (c.samples < 10) throw ConfigError("samples must be at least 10");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  for (const auto& s : c.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite '" + s + "'");
  std::set<std::string> names;
  for (const auto& k : c.cases) {
    if (!names.insert(k.name).second) throw ConfigError("duplicate case name " + k.name);
    try {
      make_case(k);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("case ") + k.name + ": " + e.what());
    }
  }
}

}  // namespace trilin
