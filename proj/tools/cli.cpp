// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "egokit/annotator.hpp"
#include "egokit/curation.hpp"
#include "egokit/grpo.hpp"
#include "egokit/jsonl.hpp"
#include "egokit/metrics.hpp"
#include "egokit/qa_builder.hpp"
#include "egokit/rewards.hpp"
#include "egokit/structured_output.hpp"
#include "egokit/types.hpp"
#include "egokit/version.hpp"

namespace egokit {
namespace {

std::vector<double> parse_tau_list(const std::string& text) {
  std::vector<double> taus;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string::npos) end = text.size();
    const std::string token = text.substr(begin, end - begin);
    double value = 0.0;
    const auto result =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc() ||
        result.ptr != token.data() + token.size() || value < 0.0 ||
        value > 1.0) {
      throw CLI::ValidationError("--tau",
                                 "\"" + token + "\" is not a threshold in [0,1]");
    }
    taus.push_back(value);
    begin = end + 1;
  }
  if (taus.empty()) {
    throw CLI::ValidationError("--tau", "needs at least one threshold");
  }
  return taus;
}

void add_curate_filter(CLI::App& curate, bool& verbose) {
  CLI::App* cmd = curate.add_subcommand(
      "filter", "Apply the interaction filtering rules to a detections file");

  struct Opts {
    std::string detections;
    std::string out;
    std::string kept_out;
    FilterConfig cfg;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--detections", state->detections,
                  "Input clip detections (JSONL)")
      ->required();
  cmd->add_option("--out", state->out, "Output filter decisions (JSONL)")
      ->required();
  cmd->add_option("--kept-out", state->kept_out,
                  "Also write the kept clips to this JSONL file");
  cmd->add_option("--alpha", state->cfg.alpha,
                  "Object-coverage fraction threshold")
      ->capture_default_str();
  cmd->add_option("--disp-frac", state->cfg.disp_fraction,
                  "Hand displacement threshold as a fraction of min(H,W)")
      ->capture_default_str();
  cmd->add_option("--min-dur", state->cfg.min_duration_s,
                  "Minimum clip duration in seconds")
      ->capture_default_str();
  cmd->add_option("--ego-threshold", state->cfg.ego_threshold,
                  "Minimum egocentric score")
      ->capture_default_str();
  cmd->add_option("--stride", state->cfg.frame_stride,
                  "Frame subsampling stride for the displacement rule")
      ->capture_default_str();
  cmd->add_option("--max-hands", state->cfg.max_hands,
                  "Maximum hand boxes allowed in any frame")
      ->capture_default_str();

  cmd->callback([state, &verbose] {
    (void)verbose;
    state->cfg.validate();
    const auto clips = read_jsonl_file<ClipRecord>(state->detections);
    const auto decisions = run_pipeline(clips, state->cfg);
    write_jsonl_file(state->out, decisions);
    if (!state->kept_out.empty()) {
      std::vector<ClipRecord> kept;
      for (std::size_t i = 0; i < clips.size(); ++i) {
        if (decisions[i].kept) kept.push_back(clips[i]);
      }
      write_jsonl_file(state->kept_out, kept);
    }
    std::size_t kept_count = 0;
    for (const FilterDecision& d : decisions) {
      if (d.kept) ++kept_count;
    }
    std::cerr << "kept " << kept_count << " / total " << clips.size() << "\n";
  });
}

void add_curate_segment(CLI::App& curate) {
  CLI::App* cmd = curate.add_subcommand(
      "segment", "Aggregate kept clips into long-term segments");

  struct Opts {
    std::string clips;
    std::string out;
    SegmentConfig cfg;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--clips", state->clips, "Input kept clips (JSONL)")
      ->required();
  cmd->add_option("--out", state->out, "Output segments (JSONL)")->required();
  cmd->add_option("--min-len", state->cfg.min_len_s,
                  "Minimum segment length in seconds")
      ->capture_default_str();
  cmd->add_option("--max-len", state->cfg.max_len_s,
                  "Maximum segment length in seconds")
      ->capture_default_str();
  cmd->add_option("--max-gap", state->cfg.max_gap_s,
                  "Largest allowed gap between consecutive clips in seconds")
      ->capture_default_str();
  cmd->add_option("--delimiter", state->cfg.delimiter,
                  "Separator between merged clip captions")
      ->capture_default_str();

  cmd->callback([state] {
    state->cfg.validate();
    const auto clips = read_jsonl_file<ClipRecord>(state->clips);
    const auto segments = segment_long_term(clips, state->cfg);
    write_jsonl_file(state->out, segments);
    std::cerr << "segments " << segments.size() << " / clips " << clips.size()
              << "\n";
  });
}

void add_qa_build(CLI::App& qa, bool& verbose) {
  CLI::App* cmd = qa.add_subcommand(
      "build", "Generate QA records for a split through an annotator adapter");

  struct Opts {
    std::string split;
    std::string clips;
    std::string adapter;
    std::string out;
    QaBuildOptions build;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--split", state->split,
                  "One of short|long|cot|fg-spatial|fg-temporal")
      ->required();
  cmd->add_option("--clips", state->clips,
                  "Input clips JSONL (segments JSONL for long and cot)")
      ->required();
  cmd->add_option("--adapter", state->adapter,
                  "mock:<canned-file> or http(s)://<endpoint>")
      ->required();
  cmd->add_option("--out", state->out, "Output QA records (JSONL)")->required();
  cmd->add_option("--seed", state->build.seed, "Sampling seed")
      ->capture_default_str();
  cmd->add_option("--concurrency", state->build.concurrency,
                  "Maximum in-flight adapter calls")
      ->capture_default_str();
  cmd->add_option("--ratio", state->build.sampling_ratio,
                  "Fraction of sources to annotate")
      ->capture_default_str();

  cmd->callback([state, &verbose] {
    const Split split = parse_split(state->split);
    std::vector<PromptSource> sources;
    if (split == Split::long_term || split == Split::cot) {
      for (const SegmentRecord& seg :
           read_jsonl_file<SegmentRecord>(state->clips)) {
        sources.push_back(source_from(seg));
      }
    } else {
      for (const ClipRecord& clip :
           read_jsonl_file<ClipRecord>(state->clips)) {
        sources.push_back(source_from(clip));
      }
    }
    const auto adapter = make_adapter(state->adapter);
    const RunResult result =
        run_split(sources, split, *adapter, state->build);
    write_jsonl_file(state->out, result.records);
    if (verbose) {
      for (const std::string& line : result.log) {
        std::cerr << line << "\n";
      }
    }
    std::cerr << "emitted " << result.stats.emitted << " / sources "
              << sources.size() << " (rejected " << result.stats.rejected
              << ", skipped " << result.stats.skipped << ", failed "
              << result.stats.failed << ", retries " << result.stats.retries
              << ")\n";
  });
}

void add_reward_score(CLI::App& reward) {
  CLI::App* cmd = reward.add_subcommand(
      "score", "Score tagged responses against grounding ground truth");

  struct Opts {
    std::string task;
    std::string pred;
    std::string gt;
    std::string out;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--task", state->task, "og (boxes) or tg (intervals)")
      ->required();
  cmd->add_option("--pred", state->pred,
                  "Predictions JSONL of {qa_id, response_text}")
      ->required();
  cmd->add_option("--gt", state->gt, "Ground-truth QA records (JSONL)")
      ->required();
  cmd->add_option("--out", state->out, "Output rewards (JSONL)")->required();

  cmd->callback([state] {
    const Task task = parse_task(state->task);
    const Split expected_split =
        task == Task::og ? Split::fg_spatial : Split::fg_temporal;
    const auto preds = read_jsonl_file<PredictionRecord>(state->pred);
    const auto gts = read_jsonl_file<QARecord>(state->gt);

    std::unordered_map<std::string, const QARecord*> gt_by_id;
    for (const QARecord& gt : gts) {
      if (!gt_by_id.emplace(gt.qa_id, &gt).second) {
        throw Error("duplicate ground-truth qa_id " + gt.qa_id);
      }
    }

    std::vector<RewardRecord> rewards;
    rewards.reserve(preds.size());
    for (const PredictionRecord& pred : preds) {
      const auto it = gt_by_id.find(pred.qa_id);
      if (it == gt_by_id.end()) {
        throw Error("prediction qa_id " + pred.qa_id +
                    " has no ground-truth record");
      }
      if (it->second->split != expected_split) {
        throw Error("task " + to_string(task) + " expects " +
                    to_string(expected_split) + " ground truth, but " +
                    pred.qa_id + " is " + to_string(it->second->split));
      }
      RewardRecord record;
      record.qa_id = pred.qa_id;
      record.breakdown = score_candidate(pred.response_text, *it->second);
      rewards.push_back(std::move(record));
    }
    write_jsonl_file(state->out, rewards);
    std::cerr << "scored " << rewards.size() << " predictions\n";
  });
}

void add_grpo_train_toy(CLI::App& grpo) {
  CLI::App* cmd = grpo.add_subcommand(
      "train-toy", "Train the toy softmax policy on a grounding grid");

  struct Opts {
    std::string task = "box";
    GrpoConfig cfg;
    std::string report;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--task", state->task, "box or interval")
      ->capture_default_str();
  cmd->add_option("--group-size", state->cfg.group_size,
                  "Candidates sampled per iteration")
      ->capture_default_str();
  cmd->add_option("--beta", state->cfg.beta, "KL penalty coefficient")
      ->capture_default_str();
  cmd->add_option("--lr", state->cfg.learning_rate, "Gradient-ascent step")
      ->capture_default_str();
  cmd->add_option("--iters", state->cfg.iterations, "Training iterations")
      ->capture_default_str();
  cmd->add_option("--seed", state->cfg.seed, "Sampling seed")
      ->capture_default_str();
  cmd->add_option("--std-epsilon", state->cfg.std_epsilon,
                  "Degenerate-group standard deviation floor")
      ->capture_default_str();
  cmd->add_option("--report", state->report,
                  "Output training curve (JSONL of iteration rows)")
      ->required();

  cmd->callback([state] {
    const ToyTask task = parse_toy_task(state->task);
    const TrainReport report = train_toy(task, state->cfg);
    write_jsonl_file(state->report, report.curve);
    std::fprintf(stderr, "expected reward %.4f -> %.4f, final kl %.6f\n",
                 report.initial_expected_reward(),
                 report.final_expected_reward(), report.final_kl());
  });
}

void add_eval_grounding(CLI::App& eval) {
  CLI::App* cmd = eval.add_subcommand(
      "grounding", "Evaluate predictions with grounding metrics");

  struct Opts {
    std::string kind;
    std::string pred;
    std::string gt;
    std::string tau = "0.05";
    std::string report;
  };
  auto state = std::make_shared<Opts>();
  cmd->add_option("--kind", state->kind, "spatial, temporal, or mc")
      ->required();
  cmd->add_option("--pred", state->pred,
                  "Predictions JSONL of {qa_id, response_text}")
      ->required();
  cmd->add_option("--gt", state->gt, "Ground-truth QA records (JSONL)")
      ->required();
  cmd->add_option("--tau", state->tau,
                  "Comma-separated IoU thresholds for R1 (temporal)")
      ->capture_default_str();
  cmd->add_option("--report", state->report, "Output report (single JSON)")
      ->required();

  cmd->callback([state] {
    const EvalKind kind = parse_eval_kind(state->kind);
    const std::vector<double> taus = parse_tau_list(state->tau);
    const auto preds = read_jsonl_file<PredictionRecord>(state->pred);
    const auto gts = read_jsonl_file<QARecord>(state->gt);
    const EvalReport report = evaluate(preds, gts, kind, taus);

    std::ofstream out(state->report);
    if (!out) {
      throw Error("cannot open " + state->report + " for writing");
    }
    out << json(report).dump(2) << "\n";
    std::cerr << "n " << report.n << " miou " << report.miou << "\n";
  });
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"egocentric curation, verifiable rewards, GRPO toy training, "
               "and grounding evaluation"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose,
               "Also print per-record log lines to stderr");

  CLI::App* curate =
      app.add_subcommand("curate", "Filter clips and build segments");
  curate->require_subcommand(1);
  add_curate_filter(*curate, verbose);
  add_curate_segment(*curate);

  CLI::App* qa = app.add_subcommand("qa", "QA data construction");
  qa->require_subcommand(1);
  add_qa_build(*qa, verbose);

  CLI::App* reward = app.add_subcommand("reward", "Verifiable rewards");
  reward->require_subcommand(1);
  add_reward_score(*reward);

  CLI::App* grpo = app.add_subcommand("grpo", "Policy optimization");
  grpo->require_subcommand(1);
  add_grpo_train_toy(*grpo);

  CLI::App* eval = app.add_subcommand("eval", "Evaluation metrics");
  eval->require_subcommand(1);
  add_eval_grounding(*eval);

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace egokit
