#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "common.hpp"
#include "scorenet/error.hpp"

namespace scorenet::cli {

Json RunReport::to_json() const {
  Json out;
  out["command"] = command;
  out["config"] = config;
  out["seed"] = seed;
  out["metrics"] = metrics;
  out["artifacts"] = artifacts;
  out["wall_time_ms"] = wall_time_ms;
  return out;
}

std::string suggest(const std::string& token, const std::vector<std::string>& candidates) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  };
  std::string best;
  std::size_t best_distance = 4;
  for (const std::string& c : candidates) {
    const std::size_t d = distance(token, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

namespace {

std::vector<std::string> option_names(const CLI::App* app) {
  std::vector<std::string> names;
  for (const CLI::Option* opt : app->get_options()) {
    for (const std::string& n : opt->get_lnames()) names.push_back("--" + n);
  }
  return names;
}

std::string unknown_flag_hint(const CLI::App& root, const std::vector<std::string>& args) {
  const CLI::App* scope = &root;
  for (const CLI::App* sub : root.get_subcommands({})) {
    if (!args.empty() && sub->get_name() == args.front()) scope = sub;
  }
  const std::vector<std::string> known = option_names(scope);
  for (const std::string& arg : args) {
    if (arg.rfind("--", 0) != 0) continue;
    const std::string flag = arg.substr(0, arg.find('='));
    if (std::find(known.begin(), known.end(), flag) != known.end()) continue;
    const std::string guess = suggest(flag, known);
    if (!guess.empty()) return "unknown flag " + flag + "; did you mean " + guess + "?";
    return "unknown flag " + flag;
  }
  return {};
}

Json typed(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  long long integer = 0;
  const char* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, integer); ec == std::errc() && ptr == end && !text.empty()) {
    return integer;
  }
  char* stop = nullptr;
  const double real = std::strtod(text.c_str(), &stop);
  if (!text.empty() && stop == text.c_str() + text.size() && std::isfinite(real)) return real;
  return text;
}

Json typed(const std::vector<std::string>& texts) {
  Json out = Json::array();
  for (const std::string& t : texts) out.push_back(typed(t));
  return out;
}

Json echo_config(const CLI::App* sub) {
  Json config = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "report" || name == "seed") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1 && opt->get_expected_max() <= 1) {
        config[name] = typed(results.front());
      } else {
        config[name] = typed(results);
      }
    } else if (!opt->get_default_str().empty()) {
      config[name] = typed(opt->get_default_str());
    }
  }
  return config;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandResult result;
  CLI::App app{"Spectral community detection, mixed membership, network tests and topic models", "score"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::vector<Command> commands;
  register_commands(app, commands);
  register_bench(app, commands);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    const std::string hint = unknown_flag_hint(app, args);
    err << "usage error: " << (hint.empty() ? e.what() : hint) << '\n';
    if (!args.empty() && args.front().rfind('-', 0) != 0) {
      std::vector<std::string> names;
      for (const CLI::App* sub : app.get_subcommands({})) names.push_back(sub->get_name());
      if (std::find(names.begin(), names.end(), args.front()) == names.end()) {
        const std::string guess = suggest(args.front(), names);
        if (!guess.empty()) err << "did you mean '" << guess << "'?\n";
      }
    }
    result.exit_code = 2;
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  for (Command& command : commands) {
    if (!command.app->parsed()) continue;
    RunReport& report = result.report;
    report.command = command.app->get_name();
    report.seed = command.common->seed;
    report.config = echo_config(command.app);
    Context ctx(report, *command.common);
    try {
      command.run(ctx);
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      result.exit_code = 2;
      return result;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      result.exit_code = 1;
      return result;
    }
    report.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.to_json().dump(2);
    out << text << '\n';
    if (!command.common->report.empty()) {
      std::ofstream file(command.common->report, std::ios::binary);
      if (!file) {
        err << "error: cannot write report to " << command.common->report << '\n';
        result.exit_code = 1;
        return result;
      }
      file << text << '\n';
    }
    return result;
  }
  return result;
}

}  // namespace scorenet::cli
