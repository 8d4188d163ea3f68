// Command line front end: synthesize designs, analyze single candidates,
// run scenario sweeps, export solver decks, render SVG frames.
// Errors go to stderr as one JSON object per line; exit code is nonzero.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ccm/config.hpp"
#include "ccm/deck.hpp"
#include "ccm/pipeline.hpp"
#include "ccm/results.hpp"
#include "ccm/scenario.hpp"
#include "ccm/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string vector_path;  // optional checkpoint
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_vector = true) {
  cmd->add_option("-c,--config", args.config_path, "job configuration file")->required();
  cmd->add_option("-o,--out", args.out_dir, "output directory");
  if (with_vector)
    cmd->add_option("--vector", args.vector_path,
                    "design-vector checkpoint (default: the initial vector)");
}

ccm::DesignVector load_vector(const ccm::DesignDomain& domain, const CommonArgs& args) {
  if (args.vector_path.empty()) return ccm::initial_vector(domain);
  return ccm::read_vector_checkpoint(args.vector_path);
}

void report_error(const std::string& kind, const std::string& message) {
  json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

std::ofstream must_open(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ccm::IoError("cannot write '" + p.string() + "'");
  return out;
}

int cmd_synth(const CommonArgs& args, std::optional<std::uint64_t> seed_override,
              std::optional<int> iters_override) {
  ccm::JobConfig cfg = ccm::read_config(args.config_path);
  if (seed_override) cfg.seed = *seed_override;
  if (iters_override) cfg.max_iterations = *iters_override;
  const ccm::DesignDomain domain = ccm::make_domain(cfg);
  const ccm::CandidateEvaluator ev(domain, ccm::make_pipeline_config(cfg));
  const ccm::SearchConfig sc = ccm::make_search_config(cfg);

  std::optional<ccm::DesignVector> initial;
  if (!args.vector_path.empty()) initial = ccm::read_vector_checkpoint(args.vector_path);

  const ccm::SearchResult res = ccm::run_search(
      domain, sc, [&](const ccm::DesignVector& v) { return ev.evaluate(v); }, initial);

  fs::create_directories(args.out_dir);
  ccm::write_search_log_csv(res.history, (fs::path(args.out_dir) / "search_log.csv").string());
  ccm::write_vector_checkpoint(res.best, (fs::path(args.out_dir) / "best_vector.txt").string());

  ccm::CandidateArtifacts best = ev.evaluate_full(res.best);
  if (best.analyzed)
    ccm::write_path_csv(best.solution.trace, (fs::path(args.out_dir) / "best_path.csv").string());

  std::cout << "iterations: " << res.history.back().iteration << "\n";
  std::cout << "best objective: " << res.best_te << "\n";
  std::cout << "outputs in " << args.out_dir << "\n";
  return 0;
}

int cmd_analyze(const CommonArgs& args) {
  const ccm::JobConfig cfg = ccm::read_config(args.config_path);
  const ccm::DesignDomain domain = ccm::make_domain(cfg);
  const ccm::CandidateEvaluator ev(domain, ccm::make_pipeline_config(cfg));
  const ccm::DesignVector v = load_vector(domain, args);

  ccm::CandidateArtifacts art = ev.prepare(v);
  ccm::AnalyzeOptions opt;
  opt.record_fields = true;
  opt.record_contact_history = true;
  ev.analyze(art, opt);

  fs::create_directories(args.out_dir);
  std::cout << "objective: " << art.objective;
  if (art.penalty) std::cout << " (penalized: " << ccm::penalty_reason_name(*art.penalty) << ")";
  std::cout << "\n";
  if (art.prepared) {
    std::cout << "mesh: " << art.mesh.nodes.size() << " nodes, " << art.mesh.elements.size()
              << " elements, " << art.loops.size() << " loops, " << art.surfaces.size()
              << " surfaces\n";
  }
  if (art.analyzed) {
    ccm::write_path_csv(art.solution.trace, (fs::path(args.out_dir) / "path.csv").string());
    ccm::write_contact_history_csv(art.solution,
                                   (fs::path(args.out_dir) / "contact_history.csv").string());
    std::cout << "converged steps: " << art.solution.converged_steps << "\n";
  }
  return art.penalty ? 2 : 0;
}

int cmd_scenario(const CommonArgs& args, const std::string& name) {
  const ccm::JobConfig cfg = ccm::read_config(args.config_path);
  const ccm::DesignDomain domain = ccm::make_domain(cfg);
  const ccm::CandidateEvaluator ev(domain, ccm::make_pipeline_config(cfg));
  const ccm::DesignVector v = load_vector(domain, args);

  std::vector<std::string> names;
  if (!name.empty()) names.push_back(name);
  else
    for (const auto& [n, _] : cfg.scenarios) names.push_back(n);
  if (names.empty()) throw ccm::ConfigError("no scenarios defined in the config");

  fs::create_directories(args.out_dir);
  for (const auto& n : names) {
    const ccm::ScenarioReport rep = ccm::run_scenario(ev, v, cfg, n);
    std::cout << rep.to_text() << "\n";
    auto out = must_open(fs::path(args.out_dir) / ("scenario_" + n + ".csv"));
    out << rep.to_csv();
  }
  return 0;
}

int cmd_export_deck(const CommonArgs& args) {
  const ccm::JobConfig cfg = ccm::read_config(args.config_path);
  const ccm::DesignDomain domain = ccm::make_domain(cfg);
  const ccm::CandidateEvaluator ev(domain, ccm::make_pipeline_config(cfg));
  const ccm::DesignVector v = load_vector(domain, args);

  ccm::CandidateArtifacts art = ev.prepare(v);
  if (art.penalty)
    throw ccm::DeckError(std::string("candidate cannot be meshed: ") +
                         ccm::penalty_reason_name(*art.penalty));
  ccm::Material mat{cfg.youngs_modulus_n_mm2, cfg.poisson_ratio, art.topology.thickness};
  const std::string deck =
      ccm::export_deck(art.mesh, art.loops, art.assignment, art.surfaces, art.loadcase, mat);
  ccm::validate_deck(deck);

  fs::create_directories(args.out_dir);
  const fs::path p = fs::path(args.out_dir) / "model.deck";
  must_open(p) << deck;
  std::cout << "deck written to " << p.string() << "\n";
  return 0;
}

int cmd_render(const CommonArgs& args) {
  const ccm::JobConfig cfg = ccm::read_config(args.config_path);
  const ccm::DesignDomain domain = ccm::make_domain(cfg);
  const ccm::CandidateEvaluator ev(domain, ccm::make_pipeline_config(cfg));
  const ccm::DesignVector v = load_vector(domain, args);

  ccm::CandidateArtifacts art = ev.prepare(v);
  ccm::AnalyzeOptions opt;
  opt.record_fields = true;
  ev.analyze(art, opt);
  if (!art.analyzed)
    throw ccm::IoError(std::string("analysis failed: ") +
                       (art.penalty ? ccm::penalty_reason_name(*art.penalty) : "unknown"));
  ccm::write_svg_frames(art, ev.config().desired_path, args.out_dir);
  std::cout << art.solution.step_fields.size() << " frames written to " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact-aided compliant mechanism synthesis"};
  app.require_subcommand(1);

  CommonArgs synth_args, analyze_args, scenario_args, deck_args, render_args;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> iters_override;
  std::string scenario_name;

  auto* synth = app.add_subcommand("synth", "run the hill-climber synthesis");
  add_common(synth, synth_args);
  synth->add_option("--seed", seed_override, "override search.seed");
  synth->add_option("--iterations", iters_override, "override search.max_iterations");

  auto* analyze = app.add_subcommand("analyze", "analyze a single candidate");
  add_common(analyze, analyze_args);

  auto* scenario = app.add_subcommand("scenario", "run scenario sweeps");
  add_common(scenario, scenario_args);
  scenario->add_option("--name", scenario_name, "scenario block name (default: all)");

  auto* deck = app.add_subcommand("export-deck", "write the solver deck for a candidate");
  add_common(deck, deck_args);

  auto* render = app.add_subcommand("render", "write per-step SVG frames");
  add_common(render, render_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_args, seed_override, iters_override);
    if (analyze->parsed()) return cmd_analyze(analyze_args);
    if (scenario->parsed()) return cmd_scenario(scenario_args, scenario_name);
    if (deck->parsed()) return cmd_export_deck(deck_args);
    if (render->parsed()) return cmd_render(render_args);
  } catch (const ccm::ConfigError& e) {
    report_error("config", e.what());
    return 1;
  } catch (const ccm::DeckError& e) {
    report_error("deck", e.what());
    return 1;
  } catch (const ccm::IoError& e) {
    report_error("io", e.what());
    return 1;
  } catch (const ccm::Error& e) {
    report_error("engine", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
