#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gnnsim/config.hpp"
#include "gnnsim/csr_graph.hpp"
#include "gnnsim/pipeline.hpp"
#include "gnnsim/sweep.hpp"

namespace {

using namespace gnnsim;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string format;
  std::string seed;
  bool print_config = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "settings file (key = value lines)");
  cmd->add_option("--set", a.sets, "override one setting, key=value (repeatable)");
  cmd->add_option("--out", a.out, "output path (default: stdout)");
  cmd->add_option("--format", a.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", a.seed, "override sampling.seed");
  cmd->add_flag("--print-config", a.print_config, "echo the effective settings");
}

KvConfig assemble(const CommonArgs& a) {
  KvConfig cfg;
  if (!a.config_path.empty()) cfg = KvConfig::parse_file(a.config_path);
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!a.seed.empty()) cfg.set("sampling.seed", a.seed);
  if (!a.out.empty()) cfg.set("output.path", a.out);
  if (!a.format.empty()) cfg.set("output.format", a.format);
  return cfg;
}

void write_report(const ExperimentSpec& spec, const std::string& text) {
  if (spec.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(spec.out_path, std::ios::binary);
  if (!out) throw SimError("cannot write " + spec.out_path);
  out << text;
}

int cmd_gen_graph(const CommonArgs& a) {
  ExperimentSpec spec = ExperimentSpec::from_config(assemble(a));
  if (a.print_config) std::cout << spec.resolved_text();
  if (!spec.recipe) throw ConfigError("gen-graph needs a recipe.* section, not graph.file");
  if (spec.out_path.empty()) throw ConfigError("gen-graph needs --out (or output.path)");
  const CsrGraph g = load_or_generate_graph(spec);
  save_csr(g, spec.out_path);
  const auto hist = degree_distribution(g);
  std::cout << "wrote " << spec.out_path << ": nodes=" << g.num_nodes()
            << " edges=" << g.num_edges() << " avg_degree=" << hist.avg()
            << " id_width=" << unsigned(csr_id_width(g.num_nodes())) << "\n";
  return 0;
}

int cmd_run(const CommonArgs& a) {
  ExperimentSpec spec = ExperimentSpec::from_config(assemble(a));
  if (a.print_config) std::cout << spec.resolved_text();
  const CsrGraph g = load_or_generate_graph(spec);
  const RunMetrics m = run_pipeline(g, spec.setup);
  std::string text;
  if (spec.format == "json")
    text = metrics_json(m);
  else
    text = metrics_csv_header() + "\n" + metrics_csv_row(m) + "\n";
  write_report(spec, text);
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& parameter, const std::string& values) {
  ExperimentSpec spec = ExperimentSpec::from_config(assemble(a));
  if (a.print_config) std::cout << spec.resolved_text();
  const SweepParameter param = parse_sweep_parameter(parameter);
  std::vector<double> vals;
  std::istringstream in(values);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values expects comma-separated numbers, got '" + item + "'");
    }
  }
  const CsrGraph g = load_or_generate_graph(spec);
  const SweepResult r = run_sweep(g, spec.setup, param, vals);
  write_report(spec, spec.format == "json" ? sweep_json(r) : sweep_csv(r));
  return 0;
}

int cmd_validate(const CommonArgs& a) {
  ExperimentSpec spec = ExperimentSpec::from_config(assemble(a));
  if (a.print_config) std::cout << spec.resolved_text();
  spec.setup.ssd.validate();
  spec.setup.host.validate();
  spec.setup.isp.validate();
  spec.setup.sampling.validate();
  spec.setup.walk.validate();
  spec.setup.pipeline.validate();
  std::cout << "config ok\n";
  if (!spec.graph_file.empty()) {
    const CsrGraph g = load_csr(spec.graph_file);
    g.validate();
    const auto hist = degree_distribution(g);
    std::cout << "graph ok: nodes=" << g.num_nodes() << " edges=" << g.num_edges()
              << " avg_degree=" << hist.avg() << "\n";
  } else {
    spec.recipe->base.validate();
    std::cout << "recipe ok: base_dim=" << spec.recipe->base.dim
              << " cells=" << spec.recipe->base.cells.size()
              << " reps=" << spec.recipe->base.reps << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual-time simulator for storage-side GNN minibatch preparation"};
  app.require_subcommand(1);

  CommonArgs gen_args, run_args, sweep_args, validate_args;
  std::string sweep_parameter, sweep_values;

  CLI::App* gen = app.add_subcommand("gen-graph", "expand a recipe and write a CSR graph file");
  add_common(gen, gen_args);
  CLI::App* run = app.add_subcommand("run", "simulate one training run");
  add_common(run, run_args);
  CLI::App* sweep = app.add_subcommand("sweep", "rerun while varying one parameter");
  add_common(sweep, sweep_args);
  sweep->add_option("--parameter", sweep_parameter,
                    "workers | coalesce_granularity | fanout_scale | path")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  CLI::App* validate = app.add_subcommand("validate", "lint a config and its graph file");
  add_common(validate, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_graph(gen_args);
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args, sweep_parameter, sweep_values);
    if (validate->parsed()) return cmd_validate(validate_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
