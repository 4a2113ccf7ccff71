#include "common.hpp"

#include <fstream>
#include <sstream>

#include "scorenet/error.hpp"
#include "scorenet/io.hpp"

namespace scorenet::cli {

Context::Context(RunReport& r, const Common& common) : report(r), common_(common) {}

std::filesystem::path Context::artifact(const std::string& name) {
  const std::filesystem::path dir(common_.out_dir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / name;
  report.artifacts.push_back(path.string());
  return path;
}

std::shared_ptr<Common> add_common(CLI::App* sub) {
  auto common = std::make_shared<Common>();
  sub->add_option("--seed", common->seed, "Base random seed");
  sub->add_option("--out-dir", common->out_dir, "Directory for output files");
  sub->add_option("--report", common->report, "Also write the JSON report to this path");
  return common;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out = open_output(path);
  out << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

void write_rows_csv(const std::filesystem::path& path, const std::string& key, const std::string& prefix,
                    const Eigen::MatrixXd& rows, const std::vector<std::string>& names) {
  std::ofstream out = open_output(path);
  out << key;
  for (Index c = 0; c < rows.cols(); ++c) out << ',' << prefix << '_' << c + 1;
  out << '\n';
  for (Index r = 0; r < rows.rows(); ++r) {
    out << (names.empty() ? std::to_string(r) : names[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < rows.cols(); ++c) out << ',' << format_number(rows(r, c));
    out << '\n';
  }
}

Eigen::MatrixXd read_rows_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ',');
    std::vector<double> row;
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + cell + "'", line_no, path.string());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("inconsistent column count", line_no, path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", 0, path.string());
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) out(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Graph read_graph(const std::string& path, bool directed, bool one_indexed) {
  return load_edge_list(path, directed, one_indexed);
}

}  // namespace scorenet::cli
