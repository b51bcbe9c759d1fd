#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "qafold/dynamics.hpp"
#include "qafold/errors.hpp"
#include "qafold/fixtures.hpp"
#include "qafold/pipeline.hpp"
#include "qafold/serialize.hpp"

namespace fs = std::filesystem;
using namespace qafold;
using io::json;

namespace {

// Relative output paths land in $QAFOLD_OUTPUT_DIR when it is set.
std::string output_path(const std::string& p) {
  const char* env = std::getenv("QAFOLD_OUTPUT_DIR");
  if (!env || !*env || fs::path(p).is_absolute()) return p;
  fs::create_directories(env);
  return (fs::path(env) / p).string();
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  std::string path = output_path(out);
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  io::write_file(path, content);
}

void emit(const std::string& out, const json& j) { emit(out, j.dump(2) + "\n"); }

bool is_fixture_ref(const std::string& s) { return s.rfind("fixture:", 0) == 0; }
std::string fixture_name(const std::string& s) { return s.substr(8); }

compiler::Polynomial load_poly(const std::string& s) {
  if (is_fixture_ref(s)) return fixtures::load_polynomial(fixture_name(s));
  json j = io::read_json(s);
  if (j.contains("polynomial")) return io::polynomial_from_json(j.at("polynomial"));
  return io::polynomial_from_json(j);
}

ising::IsingModel load_ising(const std::string& s) {
  if (is_fixture_ref(s)) return fixtures::load_ising(fixture_name(s));
  return io::ising_from_json(io::read_json(s));
}

embedding::Embedding load_embedding(const std::string& s) {
  if (is_fixture_ref(s)) return fixtures::load_embedding(fixture_name(s));
  return io::embedding_from_json(io::read_json(s));
}

lattice::FoldingInstance load_instance(const std::string& s) {
  if (is_fixture_ref(s)) return fixtures::load_instance(fixture_name(s));
  return io::instance_from_json(io::read_json(s));
}

// "M,N[,K]" or a JSON file.
hardware::HardwareGraph load_graph(const std::string& s) {
  if (fs::exists(s)) return io::graph_from_json(io::read_json(s));
  std::vector<int> v;
  std::stringstream ss(s);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) v.push_back(std::stoi(part));
  } catch (const std::logic_error&) {
    v.clear();
  }
  if (v.size() < 2 || v.size() > 3) throw Error(ErrorKind::validation, "graph must be M,N[,K] or a JSON file: " + s);
  return hardware::build_chimera(v[0], v[1], v.size() == 3 ? v[2] : 4);
}

std::map<int, int> parse_bindings(const std::vector<std::string>& items) {
  std::map<int, int> m;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::validation, "expected VAR=VALUE, got " + it);
    try {
      std::string var = it.substr(0, eq);
      if (!var.empty() && var[0] == 'q') var = var.substr(1);
      m[std::stoi(var)] = std::stoi(it.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::validation, "expected VAR=VALUE, got " + it);
    }
  }
  return m;
}

std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return io::rational_from_json(json(s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice folding to annealer compiler and simulator"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = 0;

  // compile
  auto* compile = app.add_subcommand("compile", "Lattice instance -> exact polynomial");
  std::string instance_arg;
  compile->add_option("instance", instance_arg, "instance JSON or fixture:NAME")->required();
  compile->add_option("-o,--output", out);

  // fix
  auto* fix = app.add_subcommand("fix", "Fix variables of a polynomial");
  std::string poly_arg;
  std::vector<std::string> bindings;
  bool no_relabel = false;
  fix->add_option("polynomial", poly_arg)->required();
  fix->add_option("--set", bindings, "VAR=VALUE, repeatable")->required();
  fix->add_flag("--no-relabel", no_relabel);
  fix->add_option("-o,--output", out);

  // quadratize
  auto* quad = app.add_subcommand("quadratize", "Reduce to degree 2 with AND penalties");
  std::vector<std::string> collapses;
  std::string plan_file;
  quad->add_option("polynomial", poly_arg)->required();
  quad->add_option("--collapse", collapses, "i,j[,delta]; repeatable");
  quad->add_option("--plan", plan_file, "plan JSON");
  bool auto_complete = false;
  quad->add_flag("--auto", auto_complete, "complete greedily after the listed collapses");
  quad->add_option("-o,--output", out);

  // ising
  auto* ising_cmd = app.add_subcommand("ising", "Quadratic polynomial -> Ising model");
  bool no_normalize = false;
  ising_cmd->add_option("polynomial", poly_arg)->required();
  ising_cmd->add_flag("--no-normalize", no_normalize);
  ising_cmd->add_option("-o,--output", out);

  // embed
  auto* embed = app.add_subcommand("embed", "Find a minor embedding on a Chimera graph");
  std::string ising_arg, graph_arg = "1,1,4", hint_arg;
  int attempts = 24;
  embed->add_option("ising", ising_arg)->required();
  embed->add_option("--graph", graph_arg, "M,N[,K] or graph JSON");
  embed->add_option("--hint", hint_arg, "embedding JSON whose chains are kept fixed");
  embed->add_option("--attempts", attempts);
  embed->add_option("--seed", seed);
  embed->add_option("-o,--output", out);

  // apply-embedding
  auto* apply = app.add_subcommand("apply-embedding", "Build the physical Ising model");
  std::string emb_arg, gamma_arg, field_arg = "root";
  apply->add_option("ising", ising_arg)->required();
  apply->add_option("embedding", emb_arg)->required();
  apply->add_option("--graph", graph_arg);
  apply->add_option("--gamma", gamma_arg, "uniform chain strength (rational)");
  apply->add_option("--fields", field_arg)->check(CLI::IsMember({"root", "split"}));
  apply->add_option("-o,--output", out);

  // unembed
  auto* unembed = app.add_subcommand("unembed", "Map physical samples back to logical spins");
  std::string samples_arg, policy_arg = "majority";
  unembed->add_option("ising", ising_arg, "logical Ising model")->required();
  unembed->add_option("embedding", emb_arg)->required();
  unembed->add_option("samples", samples_arg, "samples JSON over the physical model")->required();
  unembed->add_option("--graph", graph_arg);
  unembed->add_option("--gamma", gamma_arg);
  unembed->add_option("--policy", policy_arg)->check(CLI::IsMember({"majority", "discard"}));
  unembed->add_option("-o,--output", out);

  // verify-embedding
  auto* verify = app.add_subcommand("verify-embedding", "Structural and spectral embedding checks");
  verify->add_option("ising", ising_arg)->required();
  verify->add_option("embedding", emb_arg)->required();
  verify->add_option("--graph", graph_arg);
  verify->add_option("--gamma", gamma_arg);
  verify->add_option("-o,--output", out);

  // solve
  auto* solve = app.add_subcommand("solve", "Exhaustive or simulated-annealing solve");
  std::string solver = "exhaustive", format = "csv";
  int reads = 100, sweeps = 1000;
  double beta0 = 0.1, beta1 = 10.0;
  bool last_state = false;
  solve->add_option("ising", ising_arg)->required();
  solve->add_option("--solver", solver)->check(CLI::IsMember({"exhaustive", "sa"}));
  solve->add_option("--reads", reads);
  solve->add_option("--sweeps", sweeps);
  solve->add_option("--beta-start", beta0);
  solve->add_option("--beta-end", beta1);
  solve->add_flag("--last-state", last_state, "report the final state of each read");
  solve->add_option("--seed", seed);
  solve->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  solve->add_option("-o,--output", out);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Instantaneous gaps along the anneal");
  std::string schedule_arg;
  double A0 = dynamics::kDefaultA0, B0 = dynamics::kDefaultB0, t_run = 1.0;
  int levels = 4, points = 201;
  spectrum->add_option("ising", ising_arg)->required();
  spectrum->add_option("--schedule", schedule_arg, "CSV tau,A_GHz,B_GHz");
  spectrum->add_option("--A0", A0);
  spectrum->add_option("--B0", B0);
  spectrum->add_option("--levels", levels);
  spectrum->add_option("--points", points);
  spectrum->add_option("-o,--output", out);

  // anneal-sim
  auto* sim = app.add_subcommand("anneal-sim", "Closed or open quantum annealing simulation");
  std::string bath_arg, out_dir = "anneal";
  bool open = false;
  int open_levels = 24, steps = 4000;
  sim->add_option("ising", ising_arg)->required();
  sim->add_option("--schedule", schedule_arg);
  sim->add_option("--A0", A0);
  sim->add_option("--B0", B0);
  sim->add_option("--t-run", t_run, "microseconds");
  sim->add_flag("--open", open, "secular master equation instead of Schroedinger");
  sim->add_option("--bath", bath_arg, "bath JSON");
  sim->add_option("--levels", open_levels);
  sim->add_option("--steps", steps);
  sim->add_option("--seed", seed, "accepted for uniformity; the simulation is deterministic");
  sim->add_option("-o,--output-dir", out_dir);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "End-to-end run writing every artifact and a manifest");
  std::string config_arg, pipe_dir;
  pipe->add_option("config", config_arg, "config JSON or fixture:NAME")->required();
  pipe->add_option("-o,--output-dir", pipe_dir);
  auto* pipe_seed = pipe->add_option("--seed", seed);

  // landscape
  auto* land = app.add_subcommand("landscape", "Per-assignment energy table");
  std::string template_arg;
  land->add_option("source", instance_arg, "instance JSON, polynomial JSON or fixture:NAME")->required();
  land->add_option("--template", template_arg, "turn template used to decode polynomial rows");
  land->add_option("-o,--output", out);

  // fixtures
  auto* fx = app.add_subcommand("fixtures", "Bundled fixtures");
  fx->require_subcommand(1);
  auto* fx_list = fx->add_subcommand("list");
  auto* fx_dump = fx->add_subcommand("dump");
  std::string fx_name;
  fx_dump->add_option("name", fx_name)->required();
  fx_dump->add_option("-o,--output", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    embedding::ApplyOptions ao;
    ao.gamma = parse_rational(gamma_arg);
    ao.fields = field_arg == "split" ? embedding::FieldPlan::split : embedding::FieldPlan::root;

    if (*compile) {
      auto inst = load_instance(instance_arg);
      auto p = pipeline::compile_instance(inst);
      emit(out, io::to_json(p));
      if (!out.empty()) std::cout << p.to_string() << "\n";
    } else if (*fix) {
      auto p = compiler::fix_variables(load_poly(poly_arg), parse_bindings(bindings), !no_relabel);
      emit(out, io::to_json(p));
      if (!out.empty()) std::cout << p.to_string() << "\n";
    } else if (*quad) {
      compiler::QuadratizationPlan plan;
      if (!plan_file.empty()) plan = io::plan_from_json(io::read_json(plan_file));
      for (const auto& c : collapses) {
        std::vector<std::string> parts;
        std::stringstream ss(c);
        std::string part;
        while (std::getline(ss, part, ',')) parts.push_back(part);
        if (parts.size() < 2 || parts.size() > 3) throw Error(ErrorKind::validation, "collapse must be i,j[,delta]: " + c);
        compiler::Collapse col{std::stoi(parts[0]), std::stoi(parts[1]), std::nullopt};
        if (parts.size() == 3) col.delta = parse_rational(parts[2]);
        plan.collapses.push_back(col);
      }
      if (auto_complete || (plan_file.empty() && collapses.empty())) plan.auto_complete = true;
      auto q = compiler::quadratize(load_poly(poly_arg), plan);
      emit(out, io::to_json(q));
      if (!out.empty()) std::cout << q.quadratic.to_string() << "\n";
    } else if (*ising_cmd) {
      auto m = ising::spin_form(load_poly(poly_arg));
      if (!no_normalize) m = ising::normalize(m);
      emit(out, io::to_json(m));
      if (!out.empty()) std::cout << m.to_string() << "\n";
    } else if (*embed) {
      auto m = load_ising(ising_arg);
      auto g = load_graph(graph_arg);
      embedding::EmbedOptions eo;
      eo.seed = seed;
      eo.attempts = attempts;
      if (!hint_arg.empty()) eo.hint = load_embedding(hint_arg).chains;
      emit(out, io::to_json(embedding::embed(m, g, eo)));
    } else if (*apply) {
      auto e = embedding::apply_embedding(load_ising(ising_arg), load_embedding(emb_arg), load_graph(graph_arg), ao);
      json j = io::to_json(e.model);
      j["qubits"] = e.qubits;
      j["embedding"] = io::to_json(e.embedding);
      emit(out, j);
    } else if (*unembed) {
      auto logical = load_ising(ising_arg);
      auto e = embedding::apply_embedding(logical, load_embedding(emb_arg), load_graph(graph_arg), ao);
      auto policy = policy_arg == "discard" ? embedding::ChainPolicy::discard : embedding::ChainPolicy::majority;
      json in = io::read_json(samples_arg);
      json rows = json::array();
      for (const auto& s : in.at("samples")) {
        auto spins = s.at("spins").get<std::vector<int>>();
        if (static_cast<int>(spins.size()) != e.model.n)
          throw Error(ErrorKind::validation, "sample has " + std::to_string(spins.size()) + " spins, model has " +
                                                 std::to_string(e.model.n));
        auto u = embedding::unembed(spins, e, policy);
        json r = {{"count", s.value("count", 1)}, {"broken_chains", u.broken_chains}};
        if (u.spins) {
          auto mask = ising::mask_from_spins(*u.spins);
          r["assignment"] = lattice::assignment_bits(mask, logical.n);
          r["spins"] = *u.spins;
          r["energy"] = io::rational_to_json(logical.binary_energy(mask));
        } else {
          r["assignment"] = nullptr;
        }
        rows.push_back(r);
      }
      emit(out, json{{"policy", policy_arg}, {"samples", rows}});
    } else if (*verify) {
      auto r = embedding::verify_embedding(load_ising(ising_arg), load_embedding(emb_arg), load_graph(graph_arg), ao);
      json j = {{"ok", r.ok()}, {"violations", r.violations}, {"spectrum_checked", r.spectrum_checked},
                {"minimizers_match", r.minimizers_match}};
      if (r.min_broken_energy) j["min_broken_energy"] = io::rational_to_json(*r.min_broken_energy);
      emit(out, j);
      if (!r.ok()) {
        for (const auto& v : r.violations) std::cerr << "violation: " << v << "\n";
        return exit_code(ErrorKind::embedding);
      }
    } else if (*solve) {
      auto m = load_ising(ising_arg);
      solvers::SampleSet s;
      if (solver == "exhaustive") {
        s = solvers::exhaustive_ground_states(m);
      } else {
        solvers::AnnealOptions opts;
        opts.reads = reads;
        opts.schedule = {beta0, beta1, sweeps};
        opts.seed = seed;
        opts.keep_best = !last_state;
        s = solvers::simulated_anneal(m, opts);
      }
      emit(out, format == "json" ? io::to_json(s, m.n).dump(2) + "\n" : io::samples_csv(s, m.n));
    } else if (*spectrum) {
      auto m = load_ising(ising_arg);
      auto sched = schedule_arg.empty() ? dynamics::AnnealSchedule::linear(A0, B0, t_run)
                                        : dynamics::AnnealSchedule::parse_csv(io::read_file(schedule_arg), t_run);
      std::vector<double> grid(points);
      for (int k = 0; k < points; ++k) grid[k] = double(k) / (points - 1);
      auto r = dynamics::instantaneous_spectrum(m, sched, levels, grid);
      std::ostringstream os;
      os << "tau";
      for (int k = 1; k < levels; ++k) os << ",gap_" << k;
      os << "\n";
      for (std::size_t i = 0; i < r.tau.size(); ++i) {
        os << io::format_double(r.tau[i]);
        for (std::size_t k = 1; k < r.gaps[i].size(); ++k) os << ',' << io::format_double(r.gaps[i][k]);
        os << "\n";
      }
      emit(out, os.str());
      std::cout << "min_gap_GHz " << io::format_double(r.min_gap) << " tau_star " << io::format_double(r.tau_star) << "\n";
    } else if (*sim) {
      auto m = load_ising(ising_arg);
      auto sched = schedule_arg.empty() ? dynamics::AnnealSchedule::linear(A0, B0, t_run)
                                        : dynamics::AnnealSchedule::parse_csv(io::read_file(schedule_arg), t_run);
      dynamics::EvolutionResult r;
      if (open) {
        dynamics::BathParams bath = bath_arg.empty() ? dynamics::BathParams{} : io::bath_from_json(io::read_json(bath_arg));
        dynamics::OpenOptions oo;
        oo.levels = open_levels;
        oo.steps = steps;
        r = dynamics::evolve_open(m, sched, bath, oo);
      } else {
        r = dynamics::evolve_closed(m, sched);
      }
      std::string dir = output_path(out_dir);
      fs::create_directories(dir);
      io::write_file((fs::path(dir) / "schedule.csv").string(), io::schedule_csv(sched));
      io::write_file((fs::path(dir) / "trajectory.csv").string(), io::trajectory_csv(r));
      io::write_json((fs::path(dir) / "final.json").string(), io::final_probabilities_json(r, m.n));
      std::size_t best = 0;
      for (std::size_t a = 1; a < r.final_probabilities.size(); ++a)
        if (r.final_probabilities[a] > r.final_probabilities[best]) best = a;
      std::cout << "most_likely " << lattice::assignment_bits(best, m.n) << " p "
                << io::format_double(r.final_probabilities[best]) << "\n";
    } else if (*pipe) {
      pipeline::PipelineConfig cfg;
      if (is_fixture_ref(config_arg)) {
        cfg = pipeline::fixture_config(fixture_name(config_arg));
        cfg.output_dir = fixture_name(config_arg);
      } else {
        cfg = pipeline::PipelineConfig::from_json(io::read_json(config_arg), fs::path(config_arg).parent_path().string());
      }
      if (pipe_seed->count() > 0) cfg.seed = seed;
      if (!pipe_dir.empty()) cfg.output_dir = pipe_dir;
      cfg.output_dir = output_path(cfg.output_dir);
      auto r = pipeline::run_pipeline(cfg);
      std::cout << r.summary.dump(2) << "\nmanifest " << r.manifest_path << "\n";
    } else if (*land) {
      if (!is_fixture_ref(instance_arg) && fs::exists(instance_arg) && io::read_json(instance_arg).contains("sequence")) {
        auto inst = load_instance(instance_arg);
        emit(out, io::landscape_csv(lattice::enumerate_landscape(inst), inst.arity()));
      } else if (is_fixture_ref(instance_arg) &&
                 fixtures::fixture_info(fixture_name(instance_arg)).kind == fixtures::FixtureKind::instance) {
        auto inst = load_instance(instance_arg);
        emit(out, io::landscape_csv(lattice::enumerate_landscape(inst), inst.arity()));
      } else {
        auto p = load_poly(instance_arg);
        std::optional<lattice::TurnTemplate> t;
        if (!template_arg.empty()) t = lattice::TurnTemplate::parse(template_arg);
        emit(out, io::landscape_csv(solvers::landscape_report(p, t ? &*t : nullptr), p.arity()));
      }
    } else if (*fx) {
      if (*fx_list) {
        for (const auto& f : fixtures::list_fixtures())
          std::cout << f.name << "\t" << fixtures::to_string(f.kind) << "\t" << f.variant << "\t" << f.description << "\n";
        for (const auto& n : pipeline::fixture_config_names()) std::cout << n << "\tpipeline\tderived\tend-to-end config\n";
      } else {
        const auto& info = fixtures::fixture_info(fx_name);
        json j = {{"name", info.name}, {"kind", fixtures::to_string(info.kind)}, {"variant", info.variant},
                  {"sanitizations", info.sanitizations}};
        switch (info.kind) {
          case fixtures::FixtureKind::polynomial: {
            auto p = fixtures::load_polynomial(fx_name);
            j["text"] = p.to_string();
            j["polynomial"] = io::to_json(p);
            break;
          }
          case fixtures::FixtureKind::ising: {
            auto m = fixtures::load_ising(fx_name);
            j["text"] = m.to_string();
            j["ising"] = io::to_json(m);
            break;
          }
          case fixtures::FixtureKind::embedding: j["embedding"] = io::to_json(fixtures::load_embedding(fx_name)); break;
          case fixtures::FixtureKind::instance: j["instance"] = io::to_json(fixtures::load_instance(fx_name)); break;
        }
        emit(out, j);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
