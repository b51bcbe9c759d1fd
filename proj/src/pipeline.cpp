#include "qafold/pipeline.hpp"

#include <filesystem>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"

namespace qafold::pipeline {

namespace fs = std::filesystem;

compiler::Polynomial compile_instance(const lattice::FoldingInstance& inst) {
  inst.validate();
  return compiler::interpolate_polynomial([&](std::uint64_t a) { return inst.energy(a); },
                                          static_cast<int>(inst.arity()));
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorKind::stage, "sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

namespace {

json load_ref(const json& j, const std::string& base_dir) {
  if (!j.is_string()) return j;
  fs::path p(j.get<std::string>());
  if (p.is_relative()) p = fs::path(base_dir) / p;
  if (!fs::exists(p)) throw Error(ErrorKind::validation, "referenced file does not exist: " + p.string());
  return io::read_json(p.string());
}

json fixing_to_json(const std::map<int, int>& f) {
  json o = json::object();
  for (auto [k, v] : f) o[std::to_string(k)] = v;
  return o;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j, const std::string& base_dir) {
  PipelineConfig c;
  try {
    c.name = j.value("name", c.name);
    if (j.contains("instance")) {
      const auto& v = j.at("instance");
      if (v.is_string() && !fs::path(v.get<std::string>()).has_extension())
        c.instance = fixtures::load_instance(v.get<std::string>());
      else
        c.instance = io::instance_from_json(load_ref(v, base_dir));
    }
    if (j.contains("polynomial_fixture")) c.polynomial_fixture = j.at("polynomial_fixture").get<std::string>();
    if (j.contains("decode_template")) c.decode_template = j.at("decode_template").get<std::string>();
    if (j.contains("fixings"))
      for (const auto& f : j.at("fixings")) {
        std::map<int, int> m;
        for (const auto& [k, v] : f.items()) m[std::stoi(k)] = v.get<int>();
        c.fixings.push_back(m);
      }
    if (j.contains("plan")) c.plan = io::plan_from_json(j.at("plan"));
    c.normalize = j.value("normalize", c.normalize);
    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      c.graph = GraphSpec{g.at("M").get<int>(), g.at("N").get<int>(), g.value("K", 4),
                          g.value("masked", std::vector<int>{})};
    }
    if (j.contains("embedding")) {
      const auto& v = j.at("embedding");
      if (v.is_string() && !fs::path(v.get<std::string>()).has_extension())
        c.embedding = fixtures::load_embedding(v.get<std::string>());
      else
        c.embedding = io::embedding_from_json(load_ref(v, base_dir));
    }
    if (j.contains("hints"))
      for (const auto& [k, v] : j.at("hints").items()) c.hints[std::stoi(k)] = v.get<std::vector<int>>();
    if (j.contains("gamma") && !j.at("gamma").is_null()) c.gamma = io::rational_from_json(j.at("gamma"));
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      std::string kind = s.value("kind", std::string("exhaustive"));
      if (kind == "exhaustive") c.solver = SolverKind::exhaustive;
      else if (kind == "sa") c.solver = SolverKind::sa;
      else throw Error(ErrorKind::validation, "unknown solver '" + kind + "'");
      c.anneal.reads = s.value("reads", c.anneal.reads);
      c.anneal.schedule.sweeps = s.value("sweeps", c.anneal.schedule.sweeps);
      c.anneal.schedule.beta_start = s.value("beta_start", c.anneal.schedule.beta_start);
      c.anneal.schedule.beta_end = s.value("beta_end", c.anneal.schedule.beta_end);
      c.anneal.keep_best = s.value("keep_best", c.anneal.keep_best);
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::validation, std::string("malformed pipeline config: ") + e.what());
  }
  c.validate();
  return c;
}

json PipelineConfig::to_json() const {
  json j;
  j["name"] = name;
  if (instance) j["instance"] = io::to_json(*instance);
  if (polynomial_fixture) j["polynomial_fixture"] = *polynomial_fixture;
  if (decode_template) j["decode_template"] = *decode_template;
  json f = json::array();
  for (const auto& m : fixings) f.push_back(fixing_to_json(m));
  j["fixings"] = f;
  json cols = json::array();
  for (const auto& c : plan.collapses) {
    json o = {{"i", c.i}, {"j", c.j}};
    o["delta"] = c.delta ? io::rational_to_json(*c.delta) : json(nullptr);
    cols.push_back(o);
  }
  j["plan"] = {{"collapses", cols}, {"auto_complete", plan.auto_complete}};
  j["normalize"] = normalize;
  if (graph) j["graph"] = {{"M", graph->M}, {"N", graph->N}, {"K", graph->K}, {"masked", graph->masked}};
  if (embedding) j["embedding"] = io::to_json(*embedding);
  if (!hints.empty()) {
    json h = json::object();
    for (const auto& [k, v] : hints) h[std::to_string(k)] = v;
    j["hints"] = h;
  }
  j["gamma"] = gamma ? io::rational_to_json(*gamma) : json(nullptr);
  j["solver"] = {{"kind", solver == SolverKind::sa ? "sa" : "exhaustive"},
                 {"reads", anneal.reads},
                 {"sweeps", anneal.schedule.sweeps},
                 {"beta_start", anneal.schedule.beta_start},
                 {"beta_end", anneal.schedule.beta_end},
                 {"keep_best", anneal.keep_best}};
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  return j;
}

void PipelineConfig::validate() const {
  if (instance.has_value() == polynomial_fixture.has_value())
    throw Error(ErrorKind::validation, "pipeline config needs exactly one of 'instance' or 'polynomial_fixture'");
  int arity = 0;
  if (instance) {
    instance->validate();
    arity = static_cast<int>(instance->arity());
  } else {
    arity = fixtures::load_polynomial(*polynomial_fixture).arity();
    if (decode_template && lattice::TurnTemplate::parse(*decode_template).free_count() != static_cast<std::size_t>(arity))
      throw Error(ErrorKind::validation, "decode_template free bits do not match the polynomial arity");
  }
  for (const auto& f : fixings)
    for (auto [k, v] : f) {
      if (k < 1 || k > arity)
        throw Error(ErrorKind::validation, "fixing references q" + std::to_string(k) + ", arity is " + std::to_string(arity));
      if (v != 0 && v != 1) throw Error(ErrorKind::validation, "fixed values must be 0 or 1");
    }
  if (graph && (graph->M < 1 || graph->N < 1 || graph->K < 1))
    throw Error(ErrorKind::validation, "graph dimensions must be positive");
  if (gamma && *gamma <= 0) throw Error(ErrorKind::validation, "gamma must be positive");
  anneal.schedule.validate();
}

namespace {

class Writer {
 public:
  explicit Writer(fs::path root) : root_(std::move(root)) {}

  void text(const std::string& rel, const std::string& content) {
    fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    io::write_file(p.string(), content);
    artifacts.emplace_back(rel, sha256_hex(content));
  }

  void json_file(const std::string& rel, const json& j) { text(rel, j.dump(2) + "\n"); }

  /// Writes, re-reads and checks the artifact decodes to the same value.
  template <typename T, typename Decode>
  void round_trip(const std::string& rel, const T& value, const json& j, Decode decode) {
    json_file(rel, j);
    T back = decode(io::read_json((root_ / rel).string()));
    if (!(back == value)) throw Error(ErrorKind::stage, "round trip of " + rel + " changed its value");
  }

  const fs::path& root() const { return root_; }
  std::vector<std::pair<std::string, std::string>> artifacts;

 private:
  fs::path root_;
};

template <typename F>
auto stage(const char* name, const std::string& artifact, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    ErrorKind kind = e.kind() == ErrorKind::capacity ? ErrorKind::capacity : ErrorKind::stage;
    throw Error(kind, std::string("stage ") + name + " (" + artifact + "): " + e.what());
  }
}

std::string branch_name(std::size_t k, const std::map<int, int>& fixing) {
  std::string s = "branch" + std::to_string(k);
  for (auto [v, b] : fixing) s += "_q" + std::to_string(v) + "=" + std::to_string(b);
  return s;
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineReport report;
  Writer out(cfg.output_dir);
  fs::create_directories(out.root());
  json cj = cfg.to_json();
  cj.erase("output_dir");  // keeps run_hash independent of where the run lands
  out.json_file("config.json", cj);

  std::optional<lattice::TurnTemplate> decoder;
  if (cfg.instance) decoder = cfg.instance->turns;
  else if (cfg.decode_template) decoder = lattice::TurnTemplate::parse(*cfg.decode_template);

  json summary;
  summary["name"] = cfg.name;
  if (cfg.polynomial_fixture) {
    const auto& info = fixtures::fixture_info(*cfg.polynomial_fixture);
    summary["fixture"] = {{"name", info.name}, {"variant", info.variant}, {"sanitizations", info.sanitizations}};
  }

  report.polynomial = stage("compile", "polynomial.json", [&] {
    return cfg.instance ? compile_instance(*cfg.instance) : fixtures::load_polynomial(*cfg.polynomial_fixture);
  });
  out.round_trip("polynomial.json", report.polynomial, io::to_json(report.polynomial), io::polynomial_from_json);
  if (cfg.instance)
    stage("compile", "landscape.csv", [&] {
      out.text("landscape.csv", io::landscape_csv(lattice::enumerate_landscape(*cfg.instance), cfg.instance->arity()));
      return 0;
    });

  if (report.polynomial.arity() == 0) {
    report.trivial = true;
    report.best_energy = report.polynomial.constant();
    if (decoder) report.trivial_fold = lattice::format_points(lattice::decode_turns(decoder->fill(0)));
    summary["trivial"] = true;
    summary["energy"] = io::rational_to_json(*report.best_energy);
    if (report.trivial_fold) summary["fold"] = *report.trivial_fold;
  } else {
    std::vector<std::map<int, int>> fixings = cfg.fixings;
    if (fixings.empty()) fixings.push_back({});
    json branches = json::array();
    for (std::size_t k = 0; k < fixings.size(); ++k) {
      BranchReport b;
      b.fixing = fixings[k];
      b.directory = branch_name(k, b.fixing);
      const std::string dir = b.directory + "/";

      b.fixed = stage("fix", dir + "fixed.json", [&] {
        return b.fixing.empty() ? report.polynomial : compiler::fix_variables(report.polynomial, b.fixing, true);
      });
      out.round_trip(dir + "fixed.json", b.fixed, io::to_json(b.fixed), io::polynomial_from_json);

      b.quadratization = stage("quadratize", dir + "quadratized.json", [&] { return compiler::quadratize(b.fixed, cfg.plan); });
      out.json_file(dir + "quadratized.json", io::to_json(b.quadratization));
      if (!(io::polynomial_from_json(io::read_json((out.root() / (dir + "quadratized.json")).string()).at("polynomial")) ==
            b.quadratization.quadratic))
        throw Error(ErrorKind::stage, "round trip of " + dir + "quadratized.json changed its value");

      b.logical = stage("ising", dir + "ising.json", [&] {
        auto m = ising::spin_form(b.quadratization.quadratic);
        return cfg.normalize ? ising::normalize(m) : m;
      });
      out.round_trip(dir + "ising.json", b.logical, io::to_json(b.logical), io::ising_from_json);

      const ising::IsingModel* solve_model = &b.logical;
      if (cfg.graph) {
        auto g = hardware::build_chimera(cfg.graph->M, cfg.graph->N, cfg.graph->K, cfg.graph->masked);
        auto emb = stage("embed", dir + "embedding.json", [&] {
          if (cfg.embedding) return *cfg.embedding;
          embedding::EmbedOptions eo;
          eo.seed = cfg.seed;
          eo.hint = cfg.hints;
          return embedding::embed(b.logical, g, eo);
        });
        embedding::ApplyOptions ao;
        ao.gamma = cfg.gamma;
        b.embedded = stage("embed", dir + "embedded.json", [&] { return embedding::apply_embedding(b.logical, emb, g, ao); });
        out.round_trip(dir + "embedding.json", b.embedded->embedding, io::to_json(b.embedded->embedding),
                       io::embedding_from_json);
        json ej = io::to_json(b.embedded->model);
        ej["qubits"] = b.embedded->qubits;
        out.json_file(dir + "embedded.json", ej);
        if (!(io::ising_from_json(io::read_json((out.root() / (dir + "embedded.json")).string())) == b.embedded->model))
          throw Error(ErrorKind::stage, "round trip of " + dir + "embedded.json changed its value");
        b.verification = stage("verify", dir + "verification.json", [&] { return embedding::verify_embedding(b.logical, emb, g, ao); });
        json vj = {{"ok", b.verification->ok()},
                   {"violations", b.verification->violations},
                   {"spectrum_checked", b.verification->spectrum_checked},
                   {"minimizers_match", b.verification->minimizers_match}};
        if (b.verification->min_broken_energy) vj["min_broken_energy"] = io::rational_to_json(*b.verification->min_broken_energy);
        out.json_file(dir + "verification.json", vj);
        solve_model = &b.embedded->model;
      }

      b.ground = stage("solve", dir + "ground.json", [&] { return solvers::exhaustive_ground_states(b.logical); });
      out.json_file(dir + "ground.json", io::to_json(b.ground, b.logical.n));
      const Rational ground_binary = b.logical.binary_energy(b.ground.samples.front().assignment);
      const std::uint64_t orig_mask = (std::uint64_t{1} << b.quadratization.original_arity) - 1;
      if (decoder) {
        auto tmpl = b.fixing.empty() ? *decoder : decoder->with_fixed(b.fixing);
        for (const auto& s : b.ground.samples)
          b.ground_folds.push_back(lattice::format_points(lattice::decode_turns(tmpl.fill(s.assignment & orig_mask))));
      }

      if (cfg.solver == SolverKind::sa) {
        auto opts = cfg.anneal;
        opts.seed = cfg.seed;
        b.samples = stage("solve", dir + "samples.csv", [&] { return solvers::simulated_anneal(*solve_model, opts); });
        out.text(dir + "samples.csv", io::samples_csv(*b.samples, solve_model->n));
        out.json_file(dir + "samples.json", io::to_json(*b.samples, solve_model->n));
        std::size_t hits = 0;
        for (const auto& s : b.samples->samples) {
          std::optional<std::uint64_t> logical_mask;
          if (b.embedded) {
            auto u = embedding::unembed(s.spins, *b.embedded, embedding::ChainPolicy::majority);
            if (u.spins) logical_mask = ising::mask_from_spins(*u.spins);
          } else {
            logical_mask = s.assignment;
          }
          if (logical_mask && b.logical.binary_energy(*logical_mask) == ground_binary) hits += s.count;
        }
        b.success_fraction = double(hits) / double(b.samples->total_reads());
      }

      if (!report.best_energy || ground_binary < *report.best_energy) report.best_energy = ground_binary;
      json bj = {{"directory", b.directory},
                 {"fixing", fixing_to_json(b.fixing)},
                 {"variables", b.fixed.arity()},
                 {"logical_spins", b.logical.n},
                 {"ancillas", b.quadratization.ancillas.size()},
                 {"ground_energy", io::rational_to_json(ground_binary)},
                 {"ground_states", b.ground.samples.size()},
                 {"ground_folds", b.ground_folds}};
      if (b.embedded) {
        bj["physical_qubits"] = b.embedded->model.n;
        bj["embedding_ok"] = b.verification->ok();
      }
      if (b.samples) bj["success_fraction"] = b.success_fraction;
      branches.push_back(bj);
      report.branches.push_back(std::move(b));
    }
    summary["branches"] = branches;
    summary["best_energy"] = io::rational_to_json(*report.best_energy);
  }

  out.json_file("report.json", summary);
  report.summary = summary;

  std::string chain;
  json arts = json::array();
  for (const auto& [path, hash] : out.artifacts) {
    arts.push_back({{"path", path}, {"sha256", hash}});
    chain += path + ":" + hash + "\n";
  }
  report.run_hash = sha256_hex(chain + "seed:" + std::to_string(cfg.seed));
  json manifest = {{"name", cfg.name}, {"seed", cfg.seed}, {"run_hash", report.run_hash}, {"artifacts", arts}};
  if (summary.contains("fixture")) manifest["fixture"] = summary["fixture"];
  io::write_json((out.root() / "manifest.json").string(), manifest);
  report.manifest_path = (out.root() / "manifest.json").string();
  report.artifacts = out.artifacts;
  return report;
}

PipelineConfig fixture_config(const std::string& name) {
  PipelineConfig c;
  c.name = name;
  if (name == "exp6") {
    c.instance = fixtures::load_instance("hpph-chaperone-instance");
    c.plan.collapses = {{1, 2, Rational(6)}, {3, 4, Rational(4)}};
    c.plan.auto_complete = false;
    c.graph = GraphSpec{};
    c.embedding = fixtures::load_embedding("exp6-embedding");
  } else if (name == "exp3") {
    c.polynomial_fixture = "exp3";
    c.decode_template = "010010q0qq";
    c.plan.collapses = {{2, 3, std::nullopt}};
    c.plan.auto_complete = false;
    c.normalize = false;
    c.graph = GraphSpec{};
    c.embedding = fixtures::load_embedding("exp3-embedding");
  } else if (name == "hpph") {
    c.instance = fixtures::load_instance("hpph-instance");
  } else if (name == "psvkma-scheme2") {
    c.polynomial_fixture = "psvkma";
    c.decode_template = lattice::TurnTemplate::standard(6, false).pattern();
    c.fixings = {{{1, 0}}, {{1, 1}, {2, 0}}};
  } else {
    throw Error(ErrorKind::validation, "unknown pipeline fixture '" + name + "'");
  }
  return c;
}

std::vector<std::string> fixture_config_names() { return {"exp3", "exp6", "hpph", "psvkma-scheme2"}; }

}  // namespace qafold::pipeline
