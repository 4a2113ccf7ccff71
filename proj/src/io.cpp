#include "scorenet/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "scorenet/error.hpp"

namespace scorenet {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

bool is_blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

long long parse_integer(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + token + "'", line);
  }
  if (used != token.size()) throw ParseError("expected an integer, got '" + token + "'", line);
  return value;
}

}  // namespace

Graph parse_edge_list(const std::string& text, bool directed, bool one_indexed) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Edge> edges;
  long long max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b)) throw ParseError("expected two node indices", line_no);
    if (fields >> extra) throw ParseError("unexpected token '" + extra + "'", line_no);
    long long u = parse_integer(a, line_no);
    long long v = parse_integer(b, line_no);
    if (one_indexed) {
      --u;
      --v;
    }
    if (u < 0 || v < 0) throw ParseError("negative node index", line_no);
    max_index = std::max({max_index, u, v});
    edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
  }
  if (max_index < 0) throw ParseError("edge list is empty", 0);
  return Graph(static_cast<Index>(max_index + 1), std::move(edges), directed);
}

Graph load_edge_list(const std::filesystem::path& path, bool directed, bool one_indexed) {
  try {
    return parse_edge_list(read_file(path), directed, one_indexed);
  } catch (const ParseError& e) {
    throw e.in(path.string());
  }
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  auto out = open_output(path);
  out << "# n=" << g.n() << (g.directed() ? " directed" : " undirected") << "\n";
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::vector<int> load_labels(const std::filesystem::path& path, Index n) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 2) throw ParseError("expected 'node,label'", line_no, path.string());
    const long long node = parse_integer(fields[0], line_no);
    const long long label = parse_integer(fields[1], line_no);
    if (node < 0 || node >= n) throw ParseError("node index out of range", line_no, path.string());
    labels[node] = static_cast<int>(label);
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_output(path);
  out << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

Corpus load_corpus(const std::filesystem::path& triplets, const std::filesystem::path& vocab) {
  Corpus corpus;
  {
    std::istringstream in(read_file(vocab));
    std::string token;
    while (std::getline(in, token)) {
      while (!token.empty() && (token.back() == '\r' || token.back() == ' ')) token.pop_back();
      if (!token.empty()) corpus.vocab.push_back(token);
    }
  }
  const Index p = static_cast<Index>(corpus.vocab.size());
  if (p == 0) throw ParseError("vocabulary is empty", 0, vocab.string());

  std::istringstream in(read_file(triplets));
  std::string line;
  std::size_t line_no = 0;
  std::map<std::pair<Index, Index>, long long> counts;
  Index n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!(fields >> a >> b >> c)) throw ParseError("expected 'doc word count'", line_no, triplets.string());
    const long long doc = parse_integer(a, line_no);
    const long long word = parse_integer(b, line_no);
    const long long count = parse_integer(c, line_no);
    if (doc < 0 || word < 0 || word >= p || count < 0) {
      throw ParseError("index or count out of range", line_no, triplets.string());
    }
    counts[{static_cast<Index>(word), static_cast<Index>(doc)}] += count;
    n = std::max<Index>(n, static_cast<Index>(doc + 1));
  }
  if (n == 0) throw ParseError("no documents", 0, triplets.string());
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(p, n);
  for (const auto& [key, count] : counts) raw(key.first, key.second) = static_cast<double>(count);
  corpus.lengths.resize(static_cast<std::size_t>(n));
  corpus.d_matrix = raw;
  for (Index i = 0; i < n; ++i) {
    const double total = raw.col(i).sum();
    if (total <= 0.0) throw ParseError("document " + std::to_string(i) + " is empty", 0, triplets.string());
    corpus.lengths[i] = static_cast<long>(total);
    corpus.d_matrix.col(i) /= total;
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& triplets, const std::filesystem::path& vocab,
                  const Corpus& corpus) {
  auto out = open_output(triplets);
  for (Index i = 0; i < corpus.n(); ++i) {
    for (Index j = 0; j < corpus.p(); ++j) {
      const double count = std::round(corpus.d_matrix(j, i) * static_cast<double>(corpus.lengths[i]));
      if (count > 0) out << i << ' ' << j << ' ' << static_cast<long long>(count) << '\n';
    }
  }
  auto vout = open_output(vocab);
  for (const auto& token : corpus.vocab) vout << token << '\n';
}

CitationPairs load_citations(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  CitationPairs out;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected 'citing,cited[,count]'", line_no, path.string());
    }
    CitationPairs::Pair pair{static_cast<Index>(parse_integer(fields[0], line_no)),
                             static_cast<Index>(parse_integer(fields[1], line_no)), 1.0};
    if (fields.size() == 3) {
      try {
        pair.count = std::stod(fields[2]);
      } catch (const std::exception&) {
        throw ParseError("bad count '" + fields[2] + "'", line_no, path.string());
      }
    }
    out.pairs.push_back(pair);
  }
  return out;
}

}  // namespace scorenet
