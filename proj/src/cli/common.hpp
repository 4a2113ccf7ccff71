#pragma once

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "scorenet/cli.hpp"
#include "scorenet/graph.hpp"

namespace scorenet::cli {

struct Common {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string report;
};

class Context {
 public:
  Context(RunReport& report, const Common& common);
  RunReport& report;
  std::uint64_t seed() const { return common_.seed; }
  /// Path inside the output directory, recorded as an artifact.
  std::filesystem::path artifact(const std::string& name);

 private:
  const Common& common_;
};

struct Command {
  CLI::App* app;
  std::shared_ptr<Common> common;
  std::function<void(Context&)> run;
};

/// Adds --seed, --out-dir and --report to `sub`.
std::shared_ptr<Common> add_common(CLI::App* sub);

void register_commands(CLI::App& root, std::vector<Command>& commands);
void register_bench(CLI::App& root, std::vector<Command>& commands);

// CSV helpers. Numbers use 12 significant digits.
std::string format_number(double x);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);
/// Header `key,<prefix>_1,...`; row names from `names` or 0-based indices.
void write_rows_csv(const std::filesystem::path& path, const std::string& key, const std::string& prefix,
                    const Eigen::MatrixXd& rows, const std::vector<std::string>& names = {});
/// Reads a CSV with a header and a leading node/row column.
Eigen::MatrixXd read_rows_csv(const std::filesystem::path& path);

Json matrix_json(const Eigen::MatrixXd& m);
Json vector_json(const Eigen::VectorXd& v);

Graph read_graph(const std::string& path, bool directed, bool one_indexed);

}  // namespace scorenet::cli
