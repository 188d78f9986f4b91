// Command-line front end: build/train/evaluate models, run marginal queries,
// convert external model formats, and run the verification suites.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "socs/compose.hpp"
#include "socs/errors.hpp"
#include "socs/oracle.hpp"
#include "socs/serialize.hpp"
#include "socs/tensorized.hpp"
#include "socs/training.hpp"
#include "socs/verify.hpp"

namespace {

using nlohmann::json;
using namespace socs;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct TrainJob {
  std::string rg_type = "random_binary_tree";
  std::uint64_t rg_seed = 0;
  std::vector<int> image_shape;  // h, w, channels
  LayerSpec layers;
  int domain_size = 2;
  TrainConfig train;
};

double json_num(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

TrainJob parse_config(const json& j) {
  TrainJob job;
  if (!j.contains("model_class")) throw ConfigError("config is missing model_class");
  job.layers.model_class = model_class_from_string(j.at("model_class").get<std::string>());
  if (j.contains("input_family")) {
    job.layers.input_family = input_family_from_string(j.at("input_family").get<std::string>());
  }
  job.layers.num_squares = int(json_num(j, "num_squares", 1));
  if (j.contains("layers")) {
    const json& l = j.at("layers");
    job.layers.sum_units = int(json_num(l, "sum_units", 1));
    job.layers.input_units = int(json_num(l, "input_units", 1));
  }
  if (j.contains("region_graph")) {
    const json& r = j.at("region_graph");
    job.rg_type = r.value("type", std::string("random_binary_tree"));
    if (job.rg_type != "random_binary_tree" && job.rg_type != "quad_tree") {
      throw ConfigError("unknown region_graph type: " + job.rg_type);
    }
    job.rg_seed = std::uint64_t(json_num(r, "seed", 0));
    if (r.contains("image_shape")) {
      job.image_shape = r.at("image_shape").get<std::vector<int>>();
      if (job.image_shape.size() == 2) job.image_shape.push_back(1);
      if (job.image_shape.size() != 3) throw ConfigError("image_shape must be [h, w, channels]");
    }
  }
  job.domain_size = int(json_num(j, "domain_size", 2));
  if (j.contains("train")) {
    const json& t = j.at("train");
    job.train.batch_size = int(json_num(t, "batch_size", job.train.batch_size));
    job.train.learning_rate = json_num(t, "learning_rate", job.train.learning_rate);
    job.train.beta1 = json_num(t, "beta1", job.train.beta1);
    job.train.beta2 = json_num(t, "beta2", job.train.beta2);
    job.train.epsilon = json_num(t, "epsilon", job.train.epsilon);
    job.train.patience = int(json_num(t, "patience", job.train.patience));
    job.train.max_epochs = int(json_num(t, "max_epochs", job.train.max_epochs));
    job.train.seed = std::uint64_t(json_num(t, "seed", 0));
    job.train.grad_clip = json_num(t, "grad_clip", 0.0);
  }
  job.layers.seed = job.train.seed;
  return job;
}

VariableTablePtr variables_for_job(const TrainJob& job, const std::vector<std::string>& names) {
  const bool continuous = job.layers.input_family == InputFamily::Gaussian;
  std::vector<Variable> vars;
  for (const auto& n : names) {
    vars.push_back({n, continuous ? Domain::real_line() : Domain::finite(job.domain_size)});
  }
  return std::make_shared<VariableTable>(std::move(vars));
}

RegionGraphPtr region_graph_for_job(const TrainJob& job, int num_vars) {
  if (job.rg_type == "quad_tree") {
    if (job.image_shape.size() != 3) {
      throw ConfigError("quad_tree region graphs need region_graph.image_shape");
    }
    auto rg = std::make_shared<RegionGraph>(
        RegionGraph::quad_tree(job.image_shape[0], job.image_shape[1], job.image_shape[2]));
    if (rg->num_vars() != num_vars) {
      throw ConfigError("image_shape does not match the CSV column count");
    }
    return rg;
  }
  return std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(num_vars, job.rg_seed));
}

std::string metrics_path_for(const std::string& model_path) {
  const std::string suffix = ".json";
  if (model_path.size() > suffix.size() &&
      model_path.compare(model_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return model_path.substr(0, model_path.size() - suffix.size()) + ".metrics.json";
  }
  return model_path + ".metrics.json";
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& valid_path, const std::string& out_path) {
  const TrainJob job = parse_config(json::parse(read_text_file(config_path)));
  const auto names = csv_column_names(data_path);
  auto vars = variables_for_job(job, names);
  const Dataset train_data = dataset_from_csv(data_path, *vars);
  const Dataset valid_data = dataset_from_csv(valid_path, *vars);
  auto rg = region_graph_for_job(job, vars->size());

  Model model = build(rg, vars, job.layers);
  FitResult fr = fit(std::move(model), train_data, valid_data, job.train);

  write_text_file(out_path, model_to_json(fr.model));
  json metrics;
  metrics["best_epoch"] = fr.best_epoch;
  metrics["best_valid_nll"] = fr.best_valid_nll;
  metrics["num_params"] = fr.model.num_params();
  json epochs = json::array();
  for (const auto& em : fr.trace) {
    epochs.push_back(json{{"epoch", em.epoch},
                          {"train_nll", em.train_nll},
                          {"valid_nll", em.valid_nll},
                          {"log_z", em.log_z},
                          {"wall_time_s", em.wall_time_s}});
  }
  metrics["epochs"] = epochs;
  write_text_file(metrics_path_for(out_path), metrics.dump(2) + "\n");
  std::cout << "trained " << to_string(fr.model.cls) << " model: best epoch " << fr.best_epoch
            << ", valid nll " << fr.best_valid_nll << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_path) {
  const Model m = model_from_json(read_text_file(model_path));
  const Dataset data = dataset_from_csv(data_path, *m.vars);
  const double nll = mean_nll(m, data);
  const int d = m.vars->size();
  json report;
  report["test_ll_mean"] = -nll;
  report["bpd"] = nll / (d * std::log(2.0));
  report["num_samples"] = data.size();
  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) write_text_file(out_path, text);
  std::cout << text;
  return kExitOk;
}

int cmd_marginalize(const std::string& model_path, const std::string& assign,
                    bool normalize) {
  const Model m = model_from_json(read_text_file(model_path));
  const int n = m.vars->size();
  Scope keep(n);
  Assignment values(n, 0.0);
  if (!assign.empty()) {
    std::stringstream ss(assign);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw ConfigError("assignment must look like X1=0.5");
      const std::string name = part.substr(0, eq);
      const int var = m.vars->index_of(name);
      if (var < 0) throw ConfigError("unknown variable: " + name);
      keep.add(var);
      values[var] = std::stod(part.substr(eq + 1));
    }
  }
  const LogComplex marg = marginalize_log(m.normalizer, keep, values);
  json out;
  out["value"] = exp_complex(marg).real();
  out["log_value"] = marg.log_mag;
  if (normalize) {
    const LogComplex lz = log_partition(m.normalizer);
    out["probability"] = std::exp(marg.log_mag - lz.log_mag);
    out["log_z"] = lz.log_mag;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_convert(const std::string& from, const std::string& input_path,
                const std::string& out_path, bool square_output) {
  const std::string text = read_text_file(input_path);
  Circuit c;
  if (from == "mps") {
    const MPS m = mps_from_json(text);
    c = square_output ? born_machine(m) : mps_to_circuit(m);
  } else if (from == "psd") {
    if (square_output) throw ConfigError("--square only applies to --from mps");
    c = psd_to_socs(psd_from_json(text));
  } else if (from == "snefy") {
    if (square_output) throw ConfigError("--square only applies to --from mps");
    c = snefy_to_socs(snefy_from_json(text));
  } else {
    throw ConfigError("unknown conversion source: " + from);
  }
  write_text_file(out_path, circuit_to_json(c));
  std::cout << "wrote " << out_path << " (" << c.num_units() << " units, " << c.num_edges()
            << " edges)\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, int max_vars, std::uint64_t seed, bool corrupt,
               const std::string& replay_dir) {
  VerifyOptions opts;
  opts.max_vars = max_vars;
  opts.seed = seed;
  opts.corrupt = corrupt;
  opts.replay_dir = replay_dir;
  const auto results = verify_suite(suite, opts);
  bool all_passed = true;
  json checks = json::array();
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    checks.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  json out;
  out["suite"] = suite;
  out["passed"] = all_passed;
  out["checks"] = checks;
  std::cout << out.dump(2) << "\n";
  return all_passed ? kExitOk : kExitVerifyFailed;
}

int classify_exit(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNumerical;
  if (dynamic_cast<const Error*>(&e) != nullptr) return kExitUsage;
  return kExitUsage;  // json/parse/io errors are usage errors
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-of-squares probabilistic circuits"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "build and train a model from CSV data");
  std::string config_path, data_path, valid_path, out_path;
  train->add_option("--config", config_path, "model/training config JSON")->required();
  train->add_option("--data", data_path, "training CSV")->required();
  train->add_option("--valid", valid_path, "validation CSV")->required();
  train->add_option("--out", out_path, "output model JSON")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "mean test log-likelihood and bits per dimension");
  std::string eval_model, eval_data, eval_out;
  eval_cmd->add_option("--model", eval_model, "model JSON")->required();
  eval_cmd->add_option("--data", eval_data, "test CSV")->required();
  eval_cmd->add_option("--out", eval_out, "report JSON path (also printed)");

  // marginalize
  auto* marg = app.add_subcommand("marginalize", "marginal query over a trained model");
  std::string marg_model, marg_assign;
  bool marg_norm = false;
  marg->add_option("--model", marg_model, "model JSON")->required();
  marg->add_option("--assign", marg_assign, "comma-separated Name=value pairs (empty: Z)");
  marg->add_flag("--normalize", marg_norm, "also print the normalized probability");

  // convert
  auto* conv = app.add_subcommand("convert", "convert external models to circuits");
  std::string conv_from, conv_in, conv_out;
  bool conv_square = false;
  conv->add_option("--from", conv_from, "mps, psd, or snefy")->required();
  conv->add_option("--input", conv_in, "input JSON")->required();
  conv->add_option("--out", conv_out, "output circuit JSON")->required();
  conv->add_flag("--square", conv_square, "emit the Born-machine square (mps only)");

  // verify
  auto* ver = app.add_subcommand("verify", "run the property suites");
  std::string ver_suite = "all", ver_replay = ".";
  int ver_max_vars = 12;
  std::uint64_t ver_seed = 0;
  bool ver_corrupt = false;
  ver->add_option("--suite", ver_suite,
                  "structural, multiply, semiring, gradients, separations, reductions, all");
  ver->add_option("--max-vars", ver_max_vars, "variable-count ceiling for randomized checks");
  ver->add_option("--seed", ver_seed, "seed for randomized checks");
  ver->add_option("--replay-dir", ver_replay, "directory for failing-case replay files");
  ver->add_flag("--corrupt", ver_corrupt, "test hook: inject a failure")->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, data_path, valid_path, out_path);
    if (eval_cmd->parsed()) return cmd_eval(eval_model, eval_data, eval_out);
    if (marg->parsed()) return cmd_marginalize(marg_model, marg_assign, marg_norm);
    if (conv->parsed()) return cmd_convert(conv_from, conv_in, conv_out, conv_square);
    if (ver->parsed()) {
      return cmd_verify(ver_suite, ver_max_vars, ver_seed, ver_corrupt, ver_replay);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exit(e);
  }
  return kExitUsage;
}
