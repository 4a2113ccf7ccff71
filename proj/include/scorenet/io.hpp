#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scorenet/graph.hpp"
#include "scorenet/models.hpp"

namespace scorenet {

/// Reads "u v" lines; '#' lines and blank lines are skipped. Self-loops are
/// dropped, duplicates merged, n = 1 + max index seen (self-loops included).
Graph load_edge_list(const std::filesystem::path& path, bool directed = false, bool one_indexed = false);
Graph parse_edge_list(const std::string& text, bool directed = false, bool one_indexed = false);

void write_edge_list(const std::filesystem::path& path, const Graph& g);

/// CSV "node,label" with header. Nodes not listed keep label -1.
std::vector<int> load_labels(const std::filesystem::path& path, Index n);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Sparse "doc word count" triplets (0-indexed) plus one token per line of
/// vocabulary. Document lengths are the per-document count sums.
Corpus load_corpus(const std::filesystem::path& triplets, const std::filesystem::path& vocab);
void write_corpus(const std::filesystem::path& triplets, const std::filesystem::path& vocab,
                  const Corpus& corpus);

struct CitationPairs {
  struct Pair {
    Index citing;
    Index cited;
    double count = 1.0;
  };
  std::vector<Pair> pairs;
};

/// CSV "citing,cited[,count]" with header.
CitationPairs load_citations(const std::filesystem::path& path);

}  // namespace scorenet
