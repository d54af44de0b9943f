// grninfer: infer, score and export gene regulatory networks from
// time-series expression data.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "grn/config.hpp"
#include "grn/csv.hpp"
#include "grn/data.hpp"
#include "grn/error.hpp"
#include "grn/evaluation.hpp"
#include "grn/model.hpp"
#include "grn/synth.hpp"
#include "grn/training.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numerical = 3 };

grn::ExpressionDataset prepare(grn::ExpressionDataset d, const std::string& normalize) {
  if (normalize == "minmax") return grn::normalize(d);
  d.normalized = true;
  if (d.values.minCoeff() < 0.0 || d.values.maxCoeff() > 1.0) {
    throw grn::DataError("values outside [0, 1]; use --normalize minmax");
  }
  return d;
}

std::string run_file(const fs::path& dir, const char* stem, std::size_t run) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_run_%02zu.csv", run + 1);
  return (dir / (std::string(stem) + buf)).string();
}

struct TrainOptions {
  std::string data;
  std::string inputs;
  std::string config;
  std::string out = ".";
  std::string normalize = "minmax";
  double dt = 1.0;
  int threads = 0;
  std::map<std::string, std::string> overrides;
};

int cmd_train(const TrainOptions& o) {
  grn::TrainConfig cfg;
  if (!o.config.empty()) cfg = grn::load_train_config(o.config);
  for (const auto& [k, v] : o.overrides) grn::apply_config_key(cfg, k, v);
  cfg.validate();

  grn::ExpressionDataset d = grn::load_dataset(o.data);
  if (!o.inputs.empty()) grn::attach_external_inputs(d, o.inputs);
  d = prepare(std::move(d), o.normalize);

  const grn::StepConfig step_cfg{o.dt, grn::Transfer::sigmoid};
  const grn::TrainResult res = grn::train(d, cfg, step_cfg, o.threads);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::string loss = "run,epoch,sse\n";
  for (const auto& run : res.runs) {
    std::cout << "run " << run.index + 1 << " seed " << run.seed << " status " << grn::to_string(run.status)
              << " final_sse " << grn::csv::format_number(run.loss_history.back());
    if (!run.message.empty()) std::cout << " (" << run.message << ")";
    std::cout << '\n';
    for (std::size_t e = 0; e < run.loss_history.size(); ++e) {
      loss += std::to_string(run.index + 1) + ',' + std::to_string(e) + ',' +
              grn::csv::format_number(run.loss_history[e]) + '\n';
    }
    if (run.status == grn::RunStatus::ok) {
      grn::save_matrix(run_file(dir, "weights", run.index), d.gene_names, run.model.weights);
      grn::save_model(run_file(dir, "model", run.index), run.model);
    }
  }
  grn::csv::write_file((dir / "loss.csv").string(), loss);

  if (res.completed() == 0) {
    std::cerr << "error: every training run failed\n";
    return exit_numerical;
  }
  grn::save_matrix((dir / "weights.csv").string(), d.gene_names, res.mean_weights);

  double mean_sse = 0.0;
  for (const auto& run : res.runs) {
    if (run.status == grn::RunStatus::ok) mean_sse += run.loss_history.back();
  }
  mean_sse /= static_cast<double>(res.completed());
  std::cout << "optimizer " << grn::to_string(cfg.optimizer) << " runs " << res.completed() << "/" << cfg.runs
            << " mean_final_sse " << grn::csv::format_number(mean_sse) << '\n';
  return exit_ok;
}

int cmd_eval(const std::string& weights, const std::string& gold_path, const std::string& mode,
             const std::string& report, const std::string& adjacency) {
  const grn::LabelledMatrix w = grn::load_matrix(weights);
  const grn::GoldNetwork gold = grn::load_gold(gold_path, w.names);
  const grn::SignedAdjacency adj = grn::discretize_iqr(w.names, w.values);
  const grn::EvalReport r = grn::score(adj, gold, grn::parse_score_mode(mode));
  if (!report.empty()) grn::csv::write_file(report, grn::format_report(r));
  if (!adjacency.empty()) grn::csv::write_file(adjacency, grn::format_adjacency_csv(adj));
  std::cout << grn::report_csv_header() << '\n' << grn::report_csv_row(r) << '\n';
  return exit_ok;
}

int cmd_simulate(const std::string& model_path, const std::string& data_path, const std::string& inputs,
                 const std::string& normalize, double dt, const std::string& out) {
  const grn::GrnModel m = grn::load_model(model_path);
  grn::ExpressionDataset d = grn::load_dataset(data_path);
  if (!inputs.empty()) grn::attach_external_inputs(d, inputs);
  d = prepare(std::move(d), normalize);
  if (d.gene_names != m.gene_names) throw grn::DataError("model and data name different genes");

  const grn::StepConfig cfg{dt, grn::Transfer::sigmoid};
  grn::validate_step(m, cfg);
  const Eigen::MatrixXd one_step = grn::one_step_predictions(m, d, cfg);
  const Eigen::MatrixXd ext = d.external ? d.external->values : Eigen::MatrixXd();
  const Eigen::MatrixXd traj = grn::rollout(m, d.values.col(0), ext, d.times() - 1, cfg);

  std::string text = "gene,time,observed,one_step,rollout\n";
  for (std::size_t i = 0; i < d.genes(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t t = 0; t < d.times(); ++t) {
      const auto c = static_cast<Eigen::Index>(t);
      text += d.gene_names[i] + ',' + grn::csv::format_number(d.time_points[t]) + ',' +
              grn::csv::format_number(d.values(r, c)) + ',' +
              (t == 0 ? std::string() : grn::csv::format_number(one_step(r, c - 1))) + ',' +
              grn::csv::format_number(traj(r, c)) + '\n';
    }
  }
  grn::csv::write_file(out, text);
  return exit_ok;
}

int cmd_synth(const grn::SynthSpec& spec, const std::string& out_data, const std::string& out_gold,
              const std::string& out_model) {
  const grn::SynthNetwork net = grn::generate_model(spec);
  const grn::ExpressionDataset d = grn::generate_dataset(net.model, spec);
  grn::save_dataset(out_data, d);
  grn::save_gold(out_gold, net.gold);
  if (!out_model.empty()) grn::save_model(out_model, net.model);
  std::cout << "genes " << spec.genes << " edges " << net.gold.edges.size() << " points " << d.times() << '\n';
  return exit_ok;
}

int cmd_noise(const std::string& data, const std::string& normalize, double level, std::uint64_t seed,
              const std::string& out) {
  const grn::ExpressionDataset d = prepare(grn::load_dataset(data), normalize);
  grn::save_dataset(out, grn::add_gaussian_noise(d, level, seed));
  return exit_ok;
}

int cmd_export(const std::string& weights, const std::string& adjacency, const std::string& format,
               const std::string& relations, const std::string& out) {
  if (weights.empty() == adjacency.empty()) throw grn::DataError("give exactly one of --weights or --adjacency");
  grn::SignedAdjacency adj;
  if (!weights.empty()) {
    const grn::LabelledMatrix w = grn::load_matrix(weights);
    adj = grn::discretize_iqr(w.names, w.values);
  } else {
    adj = grn::parse_adjacency_csv(grn::csv::read_file(adjacency), adjacency);
  }
  const std::string text = format == "sif" ? grn::format_sif(adj, relations == "signed") : grn::format_adjacency_csv(adj);
  grn::csv::write_file(out, text);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gene regulatory network inference with recurrent network models"};
  app.require_subcommand(1);

  // train
  TrainOptions train_opts;
  std::map<std::string, std::string> flag_values;
  auto* train = app.add_subcommand("train", "Fit the recurrent model and write the mean weight matrix");
  train->add_option("--data", train_opts.data, "Expression CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--inputs", train_opts.inputs, "External-input CSV")->check(CLI::ExistingFile);
  train->add_option("--config", train_opts.config, "key = value training config")->check(CLI::ExistingFile);
  train->add_option("--out", train_opts.out, "Output directory")->capture_default_str();
  train->add_option("--normalize", train_opts.normalize, "minmax or none")
      ->check(CLI::IsMember({"minmax", "none"}))
      ->capture_default_str();
  train->add_option("--dt", train_opts.dt, "Step size for one sampling interval")->capture_default_str();
  train->add_option("--threads", train_opts.threads, "Worker threads (0 = runtime default)")->capture_default_str();
  for (const auto& key : grn::train_config_keys()) {
    train->add_option("--" + key, flag_values[key], "Overrides config key '" + key + "'");
  }

  // eval
  std::string eval_weights, eval_gold, eval_mode = "unsigned", eval_report, eval_adjacency;
  auto* eval = app.add_subcommand("eval", "Discretize a weight matrix and score it against a gold network");
  eval->add_option("--weights", eval_weights, "Weight matrix CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", eval_gold, "Gold edge list")->required()->check(CLI::ExistingFile);
  eval->add_option("--mode", eval_mode, "unsigned or signed")
      ->check(CLI::IsMember({"unsigned", "signed"}))
      ->capture_default_str();
  eval->add_option("--report", eval_report, "Write key=value report here");
  eval->add_option("--adjacency", eval_adjacency, "Write the discretized matrix here");

  // simulate
  std::string sim_model, sim_data, sim_inputs, sim_normalize = "minmax", sim_out;
  double sim_dt = 1.0;
  auto* simulate = app.add_subcommand("simulate", "Observed vs predicted trajectories for plotting");
  simulate->add_option("--model", sim_model, "Model file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--data", sim_data, "Expression CSV")->required()->check(CLI::ExistingFile);
  simulate->add_option("--inputs", sim_inputs, "External-input CSV")->check(CLI::ExistingFile);
  simulate->add_option("--normalize", sim_normalize, "minmax or none")
      ->check(CLI::IsMember({"minmax", "none"}))
      ->capture_default_str();
  simulate->add_option("--dt", sim_dt, "Step size")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV")->required();

  // synth
  grn::SynthSpec spec;
  std::string synth_data, synth_gold, synth_model;
  auto* synth = app.add_subcommand("synth", "Generate a ground-truth network and its expression data");
  synth->add_option("--genes", spec.genes, "Gene count")->capture_default_str();
  synth->add_option("--density", spec.density, "Fraction of off-diagonal edges")->capture_default_str();
  synth->add_option("--points", spec.time_points, "Time points")->capture_default_str();
  synth->add_option("--range", spec.weight_range, "Maximum weight magnitude")->capture_default_str();
  synth->add_option("--dt", spec.dt, "Sampling step")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  synth->add_option("--out-data", synth_data, "Expression CSV to write")->required();
  synth->add_option("--out-gold", synth_gold, "Gold edge list to write")->required();
  synth->add_option("--out-model", synth_model, "Generating model to write");

  // noise
  std::string noise_data, noise_normalize = "none", noise_out;
  double noise_level = 0.05;
  std::uint64_t noise_seed = 1;
  auto* noise = app.add_subcommand("noise", "Add clamped Gaussian noise to normalized data");
  noise->add_option("--data", noise_data, "Expression CSV")->required()->check(CLI::ExistingFile);
  noise->add_option("--level", noise_level, "Noise sd as a fraction of each gene's range")->capture_default_str();
  noise->add_option("--seed", noise_seed, "Seed")->capture_default_str();
  noise->add_option("--normalize", noise_normalize, "minmax or none")
      ->check(CLI::IsMember({"minmax", "none"}))
      ->capture_default_str();
  noise->add_option("--out", noise_out, "Output CSV")->required();

  // export
  std::string exp_weights, exp_adjacency, exp_format = "sif", exp_relations = "signed", exp_out;
  auto* exporter = app.add_subcommand("export", "Write an inferred network as SIF or CSV");
  exporter->add_option("--weights", exp_weights, "Weight matrix CSV (discretized first)")->check(CLI::ExistingFile);
  exporter->add_option("--adjacency", exp_adjacency, "Adjacency CSV with -1/0/1 entries")->check(CLI::ExistingFile);
  exporter->add_option("--format", exp_format, "sif or csv")->check(CLI::IsMember({"sif", "csv"}))->capture_default_str();
  exporter->add_option("--relations", exp_relations, "signed (activates/inhibits) or unsigned (regulates)")
      ->check(CLI::IsMember({"signed", "unsigned"}))
      ->capture_default_str();
  exporter->add_option("--out", exp_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*train) {
      for (const auto& [k, v] : flag_values) {
        if (train->count("--" + k) > 0) train_opts.overrides[k] = v;
      }
      return cmd_train(train_opts);
    }
    if (*eval) return cmd_eval(eval_weights, eval_gold, eval_mode, eval_report, eval_adjacency);
    if (*simulate) return cmd_simulate(sim_model, sim_data, sim_inputs, sim_normalize, sim_dt, sim_out);
    if (*synth) return cmd_synth(spec, synth_data, synth_gold, synth_model);
    if (*noise) return cmd_noise(noise_data, noise_normalize, noise_level, noise_seed, noise_out);
    if (*exporter) return cmd_export(exp_weights, exp_adjacency, exp_format, exp_relations, exp_out);
  } catch (const grn::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const grn::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  }
  return exit_usage;
}
