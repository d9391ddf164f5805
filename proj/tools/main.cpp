#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using fcd::cli::Config;

// Streams that fall back to stdin/stdout for "-".
std::istream* open_input(const std::string& path, std::ifstream& file) {
  if (path == "-") return &std::cin;
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot open " << path << "\n";
    return nullptr;
  }
  return &file;
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return &std::cout;
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot write " << path << "\n";
    return nullptr;
  }
  return &file;
}

// Settings priority: command-line flags beat the config file, the config
// file beats built-in defaults.  Only keys whose flag was not given are
// applied here.
int apply_config_file(const std::string& path, CLI::App& app, Config& cfg) {
  std::ifstream file(path);
  if (!file) {
    std::cerr << "error: cannot open config " << path << "\n";
    return 2;
  }
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config " << path << ": " << e.what() << "\n";
    return 2;
  }
  if (!j.is_object()) {
    std::cerr << "error: config " << path << " must be a JSON object\n";
    return 2;
  }

  const auto flag_given = [&](const std::string& name) {
    const CLI::Option* opt = app.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  const auto number = [&](const char* key, double& field,
                          const std::string& flag) {
    if (!j.contains(key) || flag_given(flag)) return true;
    if (!j[key].is_number()) {
      std::cerr << "error: config key \"" << key << "\" must be a number\n";
      return false;
    }
    field = j[key].get<double>();
    return true;
  };
  const auto integer = [&](const char* key, auto& field,
                           const std::string& flag) {
    if (!j.contains(key) || flag_given(flag)) return true;
    if (!j[key].is_number_integer()) {
      std::cerr << "error: config key \"" << key << "\" must be an integer\n";
      return false;
    }
    field = j[key].get<std::decay_t<decltype(field)>>();
    return true;
  };

  bool ok = integer("k", cfg.k_max, "--k") &&
            integer("n", cfg.n_samples, "--n") &&
            number("delta", cfg.delta, "--delta") &&
            number("lambda", cfg.lambda, "--lambda") &&
            number("alpha1", cfg.alpha1, "--alpha1") &&
            number("alpha2", cfg.alpha2, "--alpha2") &&
            integer("nm", cfg.n_m, "--nm") &&
            integer("nq", cfg.n_q, "--nq") &&
            integer("seed", cfg.seed, "--seed") &&
            integer("trials", cfg.trials, "--trials");
  if (ok && j.contains("iou") && !flag_given("--iou")) {
    if (!j["iou"].is_number()) {
      std::cerr << "error: config key \"iou\" must be a number\n";
      ok = false;
    } else {
      cfg.nms_iou = cfg.eval_iou = j["iou"].get<double>();
    }
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier contour descriptor toolkit"};
  app.require_subcommand(1);

  Config cfg;
  std::string config_path;
  double shared_iou = 0.5;

  app.add_option("--config", config_path,
                 "JSON config file (flags take precedence)");
  app.add_option("--k", cfg.k_max, "highest descriptor frequency");
  app.add_option("--n", cfg.n_samples, "boundary sample count");
  app.add_option("--delta", cfg.delta, "non-dc squashing width");
  app.add_option("--lambda", cfg.lambda, "regression weight in match cost");
  app.add_option("--alpha1", cfg.alpha1, "coefficient-distance weight");
  app.add_option("--alpha2", cfg.alpha2, "box-distance weight");
  app.add_option("--nm", cfg.n_m, "matching rounds");
  app.add_option("--nq", cfg.n_q, "proposal budget");
  app.add_option("--iou", shared_iou, "IoU threshold for nms/eval");
  app.add_option("--seed", cfg.seed, "seed for randomized checks");
  app.add_option("--trials", cfg.trials, "trial count for checks");
  app.add_flag("--explain", cfg.explain, "add diagnostic fields to output");

  std::string input = "-", output = "-", pred_path, gt_path;

  CLI::App* encode = app.add_subcommand(
      "encode", "contour records -> descriptor records");
  encode->add_option("input", input, "contours.jsonl");
  encode->add_option("-o,--output", output, "descriptors.jsonl");

  CLI::App* decode = app.add_subcommand(
      "decode", "descriptor records -> contour records");
  decode->add_option("input", input, "descriptors.jsonl");
  decode->add_option("-o,--output", output, "contours.jsonl");

  CLI::App* match = app.add_subcommand(
      "match", "assign predictions to targets over several rounds");
  match->add_option("--pred", pred_path, "prediction descriptors.jsonl")
      ->required();
  match->add_option("--gt", gt_path, "target descriptors.jsonl")->required();
  match->add_option("-o,--output", output, "match.json");

  CLI::App* nms_cmd = app.add_subcommand(
      "nms", "suppress overlapping polygons per record");
  nms_cmd->add_option("input", input, "contours.jsonl with scores");
  nms_cmd->add_option("-o,--output", output, "filtered contours.jsonl");

  CLI::App* eval = app.add_subcommand(
      "eval", "precision/recall/F against ground truth");
  eval->add_option("--pred", pred_path, "predicted contours.jsonl")
      ->required();
  eval->add_option("--gt", gt_path, "ground-truth contours.jsonl")
      ->required();
  eval->add_option("-o,--output", output, "report.json");

  CLI::App* gradcheck = app.add_subcommand(
      "grad-check", "verify analytic refinement gradients");
  gradcheck->add_option("-o,--output", output, "report.json");

  CLI::App* attncheck = app.add_subcommand(
      "attn-check", "verify the attention kernel against direct summation");
  attncheck->add_option("-o,--output", output, "report.json");

  for (CLI::App* sub : {encode, decode, match, nms_cmd, eval, gradcheck,
                        attncheck}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad usage is an input error
  }

  if (!config_path.empty()) {
    const int rc = apply_config_file(config_path, app, cfg);
    if (rc != 0) return rc;
  }
  if (app.get_option("--iou")->count() > 0) {
    cfg.nms_iou = cfg.eval_iou = shared_iou;
  }

  std::ifstream in_file, pred_file, gt_file;
  std::ofstream out_file;
  std::ostream* out = open_output(output, out_file);
  if (!out) return 2;

  if (*encode || *decode || *nms_cmd) {
    std::istream* in = open_input(input, in_file);
    if (!in) return 2;
    if (*encode) return fcd::cli::cmd_encode(*in, *out, std::cerr, cfg);
    if (*decode) return fcd::cli::cmd_decode(*in, *out, std::cerr, cfg);
    return fcd::cli::cmd_nms(*in, *out, std::cerr, cfg);
  }
  if (*match || *eval) {
    std::istream* pred = open_input(pred_path, pred_file);
    if (!pred) return 2;
    std::istream* gt = open_input(gt_path, gt_file);
    if (!gt) return 2;
    if (*match) {
      return fcd::cli::cmd_match(*pred, *gt, *out, std::cerr, cfg);
    }
    return fcd::cli::cmd_eval(*pred, *gt, *out, std::cerr, cfg);
  }
  if (*gradcheck) return fcd::cli::cmd_grad_check(*out, std::cerr, cfg);
  return fcd::cli::cmd_attn_check(*out, std::cerr, cfg);
}
