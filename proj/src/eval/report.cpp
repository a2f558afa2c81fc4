#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "plansteps/eval.hpp"

namespace plansteps::eval {

std::optional<int> first_below(const std::vector<double>& scores, double tau) {
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] < tau) return static_cast<int>(i) + 1;
  return std::nullopt;
}

std::vector<Prediction> score_with_judge(const std::vector<EvalChain>& chains, Judge& judge, double tau) {
  std::vector<std::vector<double>> scores = judge.score(chains);
  if (scores.size() != chains.size())
    throw std::logic_error(fmt::format("judge {} returned {} score vectors for {} chains", judge.name(),
                                       scores.size(), chains.size()));
  std::vector<Prediction> out;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Prediction p;
    p.chain_id = chains[i].chain_id;
    p.valid = scores[i].size() == chains[i].steps.size();
    if (p.valid) p.first_error = first_below(scores[i], tau);
    else ++invalid;
    out.push_back(std::move(p));
  }
  if (invalid > 0) spdlog::warn("{} of {} chains excluded: wrong number of scores", invalid, chains.size());
  return out;
}

double compute_f1(double error_acc, double correct_acc) {
  if (error_acc + correct_acc == 0.0) return 0.0;
  return 2.0 * error_acc * correct_acc / (error_acc + correct_acc);
}

EvalReport make_report(const std::vector<EvalChain>& chains, const std::vector<Prediction>& predictions) {
  if (chains.size() != predictions.size()) throw std::invalid_argument("one prediction per chain is required");
  EvalReport r;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const Prediction& p = predictions[i];
    if (!p.valid) {
      ++r.invalid;
      continue;
    }
    if (chains[i].gold_first_error) {
      ++r.error_chains;
      r.error_correct += p.first_error == chains[i].gold_first_error;
    } else {
      ++r.clean_chains;
      r.clean_correct += !p.first_error.has_value();
    }
  }
  auto percent = [](std::size_t hit, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(hit) / static_cast<double>(total);
  };
  r.error_acc = percent(r.error_correct, r.error_chains);
  r.correct_acc = percent(r.clean_correct, r.clean_chains);
  r.f1 = compute_f1(r.error_acc, r.correct_acc);
  return r;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["error_acc"] = error_acc;
  j["correct_acc"] = correct_acc;
  j["f1"] = f1;
  j["counts"] = {{"error_chains", error_chains},
                 {"error_correct", error_correct},
                 {"clean_chains", clean_chains},
                 {"clean_correct", clean_correct},
                 {"invalid", invalid}};
  return j;
}

std::string format_report(const EvalReport& r) {
  return fmt::format(
      "error chains   {:>6}  accuracy {:5.1f}\n"
      "correct chains {:>6}  accuracy {:5.1f}\n"
      "invalid        {:>6}\n"
      "F1             {:>6.1f}\n",
      r.error_chains, r.error_acc, r.clean_chains, r.correct_acc, r.invalid, r.f1);
}

}  // namespace plansteps::eval
