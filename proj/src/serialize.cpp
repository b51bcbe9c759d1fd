#include "qafold/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qafold/errors.hpp"

namespace qafold::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::validation, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::validation, "cannot write " + path);
  out << content;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::validation, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

json rational_to_json(const Rational& r) { return {{"num", r.numerator()}, {"den", r.denominator()}}; }

Rational rational_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_object()) {
      std::int64_t den = j.value("den", std::int64_t{1});
      if (den == 0) throw Error(ErrorKind::validation, "rational with zero denominator");
      return Rational(j.at("num").get<std::int64_t>(), den);
    }
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(std::stoll(s));
      std::int64_t den = std::stoll(s.substr(slash + 1));
      if (den == 0) throw Error(ErrorKind::validation, "rational with zero denominator");
      return Rational(std::stoll(s.substr(0, slash)), den);
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorKind::validation, "expected a rational, got " + j.dump());
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::validation, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

json to_json(const compiler::Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms())
    terms.push_back({{"vars", m}, {"num", c.numerator()}, {"den", c.denominator()}});
  return {{"arity", p.arity()}, {"terms", terms}};
}

compiler::Polynomial polynomial_from_json(const json& j) {
  return guarded("polynomial", [&] {
    compiler::Polynomial p(j.at("arity").get<int>());
    for (const auto& t : j.at("terms")) {
      auto vars = t.at("vars").get<std::vector<int>>();
      for (int v : vars)
        if (v < 1 || v > p.arity())
          throw Error(ErrorKind::validation, "polynomial variable q" + std::to_string(v) + " outside 1.." +
                                                 std::to_string(p.arity()));
      p.add_term(compiler::make_monomial(vars), rational_from_json(t));
    }
    return p;
  });
}

json to_json(const compiler::Quadratization& q) {
  json anc = json::array();
  for (const auto& a : q.ancillas)
    anc.push_back({{"ancilla", a.index}, {"i", a.i}, {"j", a.j}, {"delta", rational_to_json(a.delta)}});
  return {{"original_arity", q.original_arity}, {"ancillas", anc}, {"polynomial", to_json(q.quadratic)}};
}

compiler::QuadratizationPlan plan_from_json(const json& j) {
  return guarded("quadratization plan", [&] {
    compiler::QuadratizationPlan plan;
    const json& list = j.is_array() ? j : j.at("collapses");
    for (const auto& c : list) {
      compiler::Collapse col{c.at("i").get<int>(), c.at("j").get<int>(), std::nullopt};
      if (c.contains("delta") && !c.at("delta").is_null()) col.delta = rational_from_json(c.at("delta"));
      plan.collapses.push_back(col);
    }
    if (j.is_object()) plan.auto_complete = j.value("auto_complete", false);
    return plan;
  });
}

json to_json(const ising::IsingModel& m) {
  json h = json::array();
  for (const auto& v : m.h) h.push_back(rational_to_json(v));
  json J = json::array();
  for (const auto& [ij, v] : m.J)
    J.push_back({{"i", ij.first}, {"j", ij.second}, {"v", rational_to_json(v)}});
  return {{"n", m.n}, {"h", h}, {"J", J}, {"offset", rational_to_json(m.offset)}, {"scale", rational_to_json(m.scale)}};
}

ising::IsingModel ising_from_json(const json& j) {
  return guarded("Ising model", [&] {
    ising::IsingModel m(j.at("n").get<int>());
    const auto& h = j.at("h");
    if (static_cast<int>(h.size()) != m.n) throw Error(ErrorKind::validation, "Ising h has the wrong length");
    for (int i = 0; i < m.n; ++i) m.h[i] = rational_from_json(h[i]);
    for (const auto& c : j.at("J")) m.add_coupling(c.at("i").get<int>(), c.at("j").get<int>(), rational_from_json(c.at("v")));
    if (j.contains("offset")) m.offset = rational_from_json(j.at("offset"));
    if (j.contains("scale")) m.scale = rational_from_json(j.at("scale"));
    if (m.scale <= 0) throw Error(ErrorKind::validation, "Ising scale must be positive");
    return m;
  });
}

json graph_to_json(const hardware::HardwareGraph& g) {
  return {{"M", g.rows()}, {"N", g.cols()}, {"K", g.half_cell()}, {"masked", g.masked()}};
}

hardware::HardwareGraph graph_from_json(const json& j) {
  return guarded("graph spec", [&] {
    return hardware::build_chimera(j.at("M").get<int>(), j.at("N").get<int>(), j.value("K", 4),
                                   j.value("masked", std::vector<int>{}));
  });
}

json to_json(const embedding::Embedding& e) {
  json chains = json::object();
  for (const auto& [v, c] : e.chains) chains[std::to_string(v)] = c;
  json gamma = json::object();
  for (const auto& [v, g] : e.gamma) gamma[std::to_string(v)] = rational_to_json(g);
  json assign = json::array();
  for (const auto& [ij, ab] : e.edge_assign)
    assign.push_back({{"i", ij.first}, {"j", ij.second}, {"qi", ab.first}, {"qj", ab.second}});
  return {{"chains", chains}, {"gamma", gamma}, {"edge_assign", assign}};
}

embedding::Embedding embedding_from_json(const json& j) {
  return guarded("embedding", [&] {
    embedding::Embedding e;
    for (const auto& [k, v] : j.at("chains").items()) {
      auto chain = v.get<std::vector<int>>();
      std::sort(chain.begin(), chain.end());
      e.chains[std::stoi(k)] = chain;
    }
    if (j.contains("gamma"))
      for (const auto& [k, v] : j.at("gamma").items()) e.gamma[std::stoi(k)] = rational_from_json(v);
    if (j.contains("edge_assign"))
      for (const auto& a : j.at("edge_assign")) {
        int i = a.at("i").get<int>(), jj = a.at("j").get<int>();
        int qi = a.at("qi").get<int>(), qj = a.at("qj").get<int>();
        if (i > jj) {
          std::swap(i, jj);
          std::swap(qi, qj);
        }
        e.edge_assign[{i, jj}] = {qi, qj};
      }
    return e;
  });
}

json to_json(const lattice::FoldingInstance& inst) {
  std::string seq;
  bool letters = true;
  for (const auto& r : inst.sequence) letters = letters && r.size() == 1;
  json j;
  if (letters) {
    for (const auto& r : inst.sequence) seq += r;
    j["sequence"] = seq;
  } else {
    j["sequence"] = inst.sequence;
  }
  j["model"] = lattice::to_string(inst.model.kind());
  if (inst.model.kind() != lattice::ModelKind::hp) {
    json pe = json::array();
    for (const auto& [ab, v] : inst.model.entries())
      if (ab.first <= ab.second) pe.push_back({{"a", ab.first}, {"b", ab.second}, {"num", v.numerator()}, {"den", v.denominator()}});
    j["pair_energies"] = pe;
  }
  j["overlap_penalty"] = rational_to_json(inst.overlap_penalty);
  if (!inst.external.empty()) {
    json ext = json::array();
    for (const auto& t : inst.external.terms) {
      json bits = json::array();
      for (auto [pos, val] : t.bits) bits.push_back({pos, val});
      ext.push_back({{"weight", rational_to_json(t.weight)}, {"bits", bits}});
    }
    j["external_potential"] = ext;
  }
  j["template"] = inst.turns.pattern();
  return j;
}

lattice::FoldingInstance instance_from_json(const json& j) {
  return guarded("instance", [&] {
    lattice::AminoSequence seq = j.at("sequence").is_string() ? lattice::parse_sequence(j.at("sequence").get<std::string>())
                                                              : j.at("sequence").get<lattice::AminoSequence>();
    auto kind = lattice::parse_model_kind(j.value("model", std::string("HP")));
    lattice::InteractionModel model = lattice::InteractionModel::hp();
    if (kind != lattice::ModelKind::hp) {
      std::vector<std::tuple<std::string, std::string, Rational>> entries;
      for (const auto& e : j.at("pair_energies"))
        entries.emplace_back(e.at("a").get<std::string>(), e.at("b").get<std::string>(), rational_from_json(e));
      model = lattice::InteractionModel::table(kind, entries);
    }
    lattice::ExternalPotential ext;
    if (j.contains("external_potential"))
      for (const auto& t : j.at("external_potential")) {
        lattice::ExternalPotential::Term term;
        term.weight = rational_from_json(t.at("weight"));
        for (const auto& b : t.at("bits")) term.bits.push_back({b.at(0).get<std::size_t>(), b.at(1).get<int>()});
        ext.terms.push_back(term);
      }
    Rational overlap = j.contains("overlap_penalty") ? rational_from_json(j.at("overlap_penalty")) : Rational(2);
    auto inst = lattice::FoldingInstance::standard(seq, model, ext, overlap);
    if (j.contains("template")) inst.turns = lattice::TurnTemplate::parse(j.at("template").get<std::string>());
    if (j.contains("fixed_bits")) {
      std::map<int, int> fixed;
      for (const auto& [k, v] : j.at("fixed_bits").items()) fixed[std::stoi(k)] = v.get<int>();
      inst.turns = inst.turns.with_fixed(fixed);
    }
    inst.validate();
    return inst;
  });
}

json to_json(const dynamics::BathParams& b) {
  json j = {{"eta", b.eta},     {"A_1f", b.A_1f},   {"alpha", b.alpha},
            {"omega_c", b.omega_c_ghz}, {"T_mK", b.T_mK}, {"Ip0_uA", b.Ip0_uA}};
  if (!b.Ip_of_tau.empty()) {
    json ip = json::array();
    for (auto [t, v] : b.Ip_of_tau) ip.push_back({t, v});
    j["Ip_of_tau"] = ip;
  }
  return j;
}

dynamics::BathParams bath_from_json(const json& j) {
  return guarded("bath", [&] {
    dynamics::BathParams b;
    b.eta = j.value("eta", b.eta);
    b.A_1f = j.value("A_1f", b.A_1f);
    b.alpha = j.value("alpha", b.alpha);
    b.omega_c_ghz = j.value("omega_c", b.omega_c_ghz);
    b.T_mK = j.value("T_mK", b.T_mK);
    b.Ip0_uA = j.value("Ip0_uA", b.Ip0_uA);
    if (j.contains("Ip_of_tau"))
      for (const auto& p : j.at("Ip_of_tau")) b.Ip_of_tau.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    b.validate();
    return b;
  });
}

std::string schedule_csv(const dynamics::AnnealSchedule& s) {
  std::ostringstream os;
  os << "tau,A_GHz,B_GHz\n";
  for (std::size_t k = 0; k < s.tau.size(); ++k)
    os << format_double(s.tau[k]) << ',' << format_double(s.A[k]) << ',' << format_double(s.B[k]) << '\n';
  return os.str();
}

std::string landscape_csv(const std::vector<lattice::LandscapeRow>& rows, std::size_t arity) {
  std::ostringstream os;
  os << "assignment_bits,valid,energy_num,energy_den,points\n";
  for (const auto& r : rows)
    os << lattice::assignment_bits(r.assignment, arity) << ',' << (r.valid ? 1 : 0) << ',' << r.energy.numerator()
       << ',' << r.energy.denominator() << ",\"" << lattice::format_points(r.fold) << "\"\n";
  return os.str();
}

std::string landscape_csv(const solvers::Landscape& l, std::size_t arity) {
  std::ostringstream os;
  os << "assignment_bits,valid,energy_num,energy_den,points\n";
  for (const auto& r : l.rows)
    os << lattice::assignment_bits(r.assignment, arity) << ',' << (r.valid ? (*r.valid ? "1" : "0") : "") << ','
       << r.energy.numerator() << ',' << r.energy.denominator() << ",\"" << r.points << "\"\n";
  return os.str();
}

std::string samples_csv(const solvers::SampleSet& s, int n) {
  std::ostringstream os;
  os << "assignment,energy_num,energy_den,count\n";
  for (const auto& x : s.samples)
    os << lattice::assignment_bits(x.assignment, n) << ',' << x.energy.numerator() << ',' << x.energy.denominator()
       << ',' << x.count << '\n';
  return os.str();
}

json to_json(const solvers::SampleSet& s, int n) {
  json samples = json::array();
  for (const auto& x : s.samples)
    samples.push_back({{"assignment", lattice::assignment_bits(x.assignment, n)},
                       {"spins", x.spins},
                       {"energy", rational_to_json(x.energy)},
                       {"count", x.count}});
  json info = json::object();
  for (const auto& [k, v] : s.info) info[k] = v;
  return {{"info", info}, {"samples", samples}};
}

std::string trajectory_csv(const dynamics::EvolutionResult& r) {
  std::ostringstream os;
  std::size_t k = r.gaps.empty() ? 0 : r.gaps.front().size();
  os << "tau";
  for (std::size_t i = 0; i < k; ++i) os << ",gap_" << i;
  for (std::size_t i = 0; i < k; ++i) os << ",pop_" << i;
  os << '\n';
  for (std::size_t row = 0; row < r.tau.size(); ++row) {
    os << format_double(r.tau[row]);
    for (double g : r.gaps[row]) os << ',' << format_double(g);
    for (double p : r.populations[row]) os << ',' << format_double(p);
    os << '\n';
  }
  return os.str();
}

json final_probabilities_json(const dynamics::EvolutionResult& r, int n) {
  json probs = json::object();
  for (std::size_t a = 0; a < r.final_probabilities.size(); ++a)
    probs[lattice::assignment_bits(a, n)] = format_double(r.final_probabilities[a]);
  return {{"steps", r.steps}, {"norm_drift", r.norm_drift}, {"probabilities", probs}};
}

}  // namespace qafold::io
