#include <csignal>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <sys/wait.h>
#include <unistd.h>

#include "plansteps/eval.hpp"
#include "plansteps/verbalizer.hpp"

namespace plansteps::eval {

nlohmann::ordered_json judge_request(const EvalChain& chain) {
  nlohmann::ordered_json j;
  j["chain_id"] = chain.chain_id;
  j["problem_nl"] = chain.problem_nl;
  j["steps"] = chain.steps;
  return j;
}

namespace {

class OracleJudge : public Judge {
 public:
  OracleJudge(std::vector<pipeline::ProblemInstance> instances, std::string template_dir, SearchLimits limits)
      : template_dir_(std::move(template_dir)), limits_(limits) {
    for (auto& i : instances) {
      std::pair key{i.domain_id, i.problem_id};
      instances_.emplace(std::move(key), std::move(i));
    }
  }

  std::string name() const override { return "oracle"; }

  std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) override {
    std::vector<std::vector<double>> out;
    for (const auto& chain : chains) {
      auto it = instances_.find(std::pair{chain.domain_id, chain.problem_id});
      if (it == instances_.end()) {
        spdlog::warn("oracle judge: no problem {}/{}", chain.domain_id, chain.problem_id);
        out.emplace_back();
        continue;
      }
      const pipeline::ProblemInstance& instance = it->second;
      GroundTask task = ground(*instance.domain, instance.problem);
      verbal::Verbalizer verbalizer(*instance.domain, verbal::load_templates(instance.domain_id, template_dir_));
      auto index = verbalizer.step_index(task);
      std::vector<std::optional<ActionId>> steps;
      for (const auto& text : chain.steps) {
        auto found = index.find(text);
        steps.push_back(found == index.end() ? std::nullopt : std::optional<ActionId>(found->second));
      }
      ActionEvaluator evaluator(task, HeuristicKind::LmCut, limits_);
      std::vector<double> scores;
      for (Category c : replay_categories(evaluator, steps)) scores.push_back(reward_of(c));
      out.push_back(std::move(scores));
    }
    return out;
  }

 private:
  std::map<std::pair<std::string, std::string>, pipeline::ProblemInstance> instances_;
  std::string template_dir_;
  SearchLimits limits_;
};

class ConstantJudge : public Judge {
 public:
  explicit ConstantJudge(double value) : value_(value) {}
  std::string name() const override { return fmt::format("const:{}", value_); }
  std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) override {
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) out.emplace_back(c.steps.size(), value_);
    return out;
  }

 private:
  double value_;
};

class RandomJudge : public Judge {
 public:
  explicit RandomJudge(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return fmt::format("random:{}", seed_); }
  std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) override {
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) {
      Rng rng(derive_seed(seed_, c.chain_id));
      std::vector<double> scores;
      for (std::size_t i = 0; i < c.steps.size(); ++i) scores.push_back(rng.uniform01());
      out.push_back(std::move(scores));
    }
    return out;
  }

 private:
  std::uint64_t seed_;
};

// {chain_id, scores} -> scores, or empty when the line does not answer `chain_id`.
std::vector<double> parse_response(const std::string& line, const std::string& chain_id) {
  try {
    auto j = nlohmann::json::parse(line);
    if (j.at("chain_id").get<std::string>() != chain_id) {
      spdlog::warn("judge answered {} where {} was expected", j.at("chain_id").dump(), chain_id);
      return {};
    }
    return j.at("scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    spdlog::warn("unreadable judge response for {}: {}", chain_id, e.what());
    return {};
  }
}

class SubprocessJudge : public Judge {
 public:
  explicit SubprocessJudge(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return command_; }

  std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) override {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw std::runtime_error("pipe() failed");
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("fork() failed");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);

    // A judge that exits early must not kill us with SIGPIPE.
    struct sigaction ignore {}, previous {};
    ignore.sa_handler = SIG_IGN;
    sigaction(SIGPIPE, &ignore, &previous);

    std::thread writer([&chains, fd = to_child[1]] {
      for (const auto& c : chains) {
        std::string line = judge_request(c).dump() + "\n";
        for (std::size_t done = 0; done < line.size();) {
          ssize_t n = write(fd, line.data() + done, line.size() - done);
          if (n <= 0) {
            close(fd);
            return;
          }
          done += static_cast<std::size_t>(n);
        }
      }
      close(fd);
    });

    std::vector<std::vector<double>> out;
    FILE* in = fdopen(from_child[0], "r");
    char* buffer = nullptr;
    std::size_t capacity = 0;
    while (out.size() < chains.size()) {
      ssize_t n = getline(&buffer, &capacity, in);
      if (n < 0) break;
      std::string line(buffer, static_cast<std::size_t>(n));
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      out.push_back(parse_response(line, chains[out.size()].chain_id));
    }
    free(buffer);
    fclose(in);
    writer.join();
    int status = 0;
    waitpid(pid, &status, 0);
    sigaction(SIGPIPE, &previous, nullptr);

    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw std::runtime_error(fmt::format("judge command '{}' failed with status {}", command_, status));
    if (out.size() < chains.size()) {
      spdlog::warn("judge answered {} of {} chains", out.size(), chains.size());
      out.resize(chains.size());
    }
    return out;
  }

 private:
  std::string command_;
};

class ScoresFileJudge : public Judge {
 public:
  explicit ScoresFileJudge(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot read {}", path_));
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        auto j = nlohmann::json::parse(line);
        scores_[j.at("chain_id").get<std::string>()] = j.at("scores").get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(fmt::format("{}:{}: {}", path_, number, e.what()));
      }
    }
  }

  std::string name() const override { return "scores:" + path_; }

  std::vector<std::vector<double>> score(const std::vector<EvalChain>& chains) override {
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) {
      auto it = scores_.find(c.chain_id);
      out.push_back(it == scores_.end() ? std::vector<double>{} : it->second);
    }
    return out;
  }

 private:
  std::string path_;
  std::map<std::string, std::vector<double>> scores_;
};

}  // namespace

std::unique_ptr<Judge> make_oracle_judge(std::vector<pipeline::ProblemInstance> instances, std::string template_dir,
                                         SearchLimits limits) {
  return std::make_unique<OracleJudge>(std::move(instances), std::move(template_dir), limits);
}

std::unique_ptr<Judge> make_constant_judge(double value) { return std::make_unique<ConstantJudge>(value); }

std::unique_ptr<Judge> make_random_judge(std::uint64_t seed) { return std::make_unique<RandomJudge>(seed); }

std::unique_ptr<Judge> make_subprocess_judge(std::string command) {
  return std::make_unique<SubprocessJudge>(std::move(command));
}

std::unique_ptr<Judge> make_scores_file_judge(const std::filesystem::path& path) {
  return std::make_unique<ScoresFileJudge>(path);
}

std::unique_ptr<Judge> make_judge(const std::string& spec, const std::vector<pipeline::ProblemInstance>& instances,
                                  const std::string& template_dir) {
  if (spec == "oracle") {
    if (instances.empty()) throw std::invalid_argument("the oracle judge needs the problems (--problems)");
    return make_oracle_judge(instances, template_dir);
  }
  if (spec.rfind("const:", 0) == 0) return make_constant_judge(std::stod(spec.substr(6)));
  if (spec == "random") return make_random_judge(0);
  if (spec.rfind("random:", 0) == 0) return make_random_judge(std::stoull(spec.substr(7)));
  return make_subprocess_judge(spec);
}

}  // namespace plansteps::eval
