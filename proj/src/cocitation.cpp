// Copyright 2026 The Cocite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cocite/cocitation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <queue>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include "cocite/error.hpp"
#include "cocite/io.hpp"
#include "cocite/quantile.hpp"

namespace cocite {

CitationCounts citation_counts(const CitationGraph& graph) {
  CitationCounts counts(graph.num_nodes(), 0);
  for (NodeIndex v = 0; v < graph.num_nodes(); ++v) counts[v] = graph.in_degree(v);
  return counts;
}

std::vector<NodeIndex> percentile_filter(const CitationCounts& counts, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError(fmt::format("percentile {} outside [0, 1]", q));
  std::vector<std::uint64_t> nonzero;
  for (auto c : counts) {
    if (c > 0) nonzero.push_back(c);
  }
  if (nonzero.empty()) throw DomainError("empty after zero-discard: no publication has a citation");
  std::sort(nonzero.begin(), nonzero.end());
  const std::uint64_t threshold = nonzero[nearest_rank(nonzero.size(), q) - 1];
  std::vector<NodeIndex> retained;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (counts[v] > 0 && counts[v] >= threshold) retained.push_back(static_cast<NodeIndex>(v));
  }
  return retained;
}

// ---------------------------------------------------------------------------
// Pair generation with bounded memory.
//
// Each worker walks a contiguous block of citing publications, buffering packed
// (a, b) keys. A full buffer is sorted, reduced to (key, count) and written to a
// spill file. The final result is a k-way merge over all runs, so the output does
// not depend on how citers were divided among workers.

namespace {

using PairKey = std::uint64_t;

struct KeyCount {
  PairKey key;
  std::uint64_t count;
};

PairKey pack(NodeIndex a, NodeIndex b) { return (static_cast<PairKey>(a) << 32) | b; }

class SpillFile {
 public:
  explicit SpillFile(std::filesystem::path path) : path_(std::move(path)) {}
  SpillFile(const SpillFile&) = delete;
  SpillFile& operator=(const SpillFile&) = delete;
  ~SpillFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// A sorted, reduced run either held in memory or on disk.
class Run {
 public:
  explicit Run(std::vector<KeyCount> data) : data_(std::move(data)) {}
  explicit Run(std::shared_ptr<SpillFile> file) : file_(std::move(file)) {}

  void open() {
    if (file_) {
      handle_.reset(std::fopen(file_->path().c_str(), "rb"));
      if (!handle_) throw IoError("cannot reopen spill file " + file_->path().string());
    }
  }

  bool next(KeyCount& out) {
    if (!file_) {
      if (pos_ == data_.size()) return false;
      out = data_[pos_++];
      return true;
    }
    if (pos_ == buffer_.size()) {
      buffer_.resize(kReadChunk);
      const std::size_t got = std::fread(buffer_.data(), sizeof(KeyCount), kReadChunk, handle_.get());
      buffer_.resize(got);
      pos_ = 0;
      if (got == 0) return false;
    }
    out = buffer_[pos_++];
    return true;
  }

 private:
  static constexpr std::size_t kReadChunk = 1 << 12;
  std::vector<KeyCount> data_;
  std::shared_ptr<SpillFile> file_;
  FilePtr handle_;
  std::vector<KeyCount> buffer_;
  std::size_t pos_ = 0;
};

std::vector<KeyCount> reduce_sorted(std::vector<PairKey>& keys) {
  std::sort(keys.begin(), keys.end());
  std::vector<KeyCount> out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.push_back({keys[i], j - i});
    i = j;
  }
  keys.clear();
  return out;
}

std::filesystem::path spill_path(const std::filesystem::path& dir) {
  static std::atomic<std::uint64_t> sequence{0};
  return dir / fmt::format("cocite-pairs-{}-{}.bin", ::getpid(), sequence.fetch_add(1));
}

struct WorkerOutput {
  std::vector<Run> runs;
};

void process_block(const CitationGraph& graph, const std::vector<bool>& is_retained, NodeIndex first,
                   NodeIndex last, std::size_t cap, const std::filesystem::path& spill_dir, WorkerOutput& out) {
  std::vector<PairKey> buffer;
  buffer.reserve(std::min<std::size_t>(cap, 1 << 20));
  std::vector<NodeIndex> kept;
  auto spill = [&] {
    auto reduced = reduce_sorted(buffer);
    auto file = std::make_shared<SpillFile>(spill_path(spill_dir));
    FilePtr handle(std::fopen(file->path().c_str(), "wb"));
    if (!handle) throw IoError("cannot create spill file " + file->path().string());
    if (std::fwrite(reduced.data(), sizeof(KeyCount), reduced.size(), handle.get()) != reduced.size()) {
      throw IoError("short write to spill file " + file->path().string());
    }
    out.runs.emplace_back(std::move(file));
  };
  for (NodeIndex citer = first; citer < last; ++citer) {
    kept.clear();
    for (NodeIndex ref : graph.references(citer)) {
      if (is_retained[ref]) kept.push_back(ref);
    }
    // References are ascending, so (kept[i], kept[j]) with i < j is canonical.
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        buffer.push_back(pack(kept[i], kept[j]));
        if (buffer.size() >= cap) spill();
      }
    }
  }
  if (!buffer.empty()) out.runs.emplace_back(reduce_sorted(buffer));
}

}  // namespace

std::vector<PairCount> generate_pairs(const CitationGraph& graph, std::span<const NodeIndex> retained,
                                      const PairGenerationOptions& options) {
  std::vector<bool> is_retained(graph.num_nodes(), false);
  for (NodeIndex v : retained) {
    if (v >= graph.num_nodes()) throw InputError(fmt::format("retained node {} not in graph", v));
    is_retained[v] = true;
  }
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t cap = std::max<std::size_t>(1, options.memory_cap_pairs / threads);
  const std::filesystem::path spill_dir =
      options.spill_dir.empty() ? std::filesystem::temp_directory_path() : options.spill_dir;

  const std::size_t n = graph.num_nodes();
  std::vector<WorkerOutput> outputs(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto block = [&](unsigned w) {
    const auto first = static_cast<NodeIndex>(n * w / threads);
    const auto last = static_cast<NodeIndex>(n * (w + 1) / threads);
    try {
      process_block(graph, is_retained, first, last, cap, spill_dir, outputs[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    block(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(block, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Run> runs;
  for (auto& o : outputs) {
    for (auto& r : o.runs) runs.push_back(std::move(r));
  }
  for (auto& r : runs) r.open();

  using HeapItem = std::pair<KeyCount, std::size_t>;
  auto greater = [](const HeapItem& x, const HeapItem& y) {
    return x.first.key != y.first.key ? x.first.key > y.first.key : x.second > y.second;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    KeyCount kc{};
    if (runs[i].next(kc)) heap.emplace(kc, i);
  }
  std::vector<PairCount> result;
  while (!heap.empty()) {
    auto [kc, idx] = heap.top();
    heap.pop();
    KeyCount next{};
    if (runs[idx].next(next)) heap.emplace(next, idx);
    const auto a = static_cast<NodeIndex>(kc.key >> 32);
    const auto b = static_cast<NodeIndex>(kc.key & 0xffffffffu);
    if (!result.empty() && result.back().a == a && result.back().b == b) {
      result.back().raw += kc.count;
    } else {
      result.push_back({a, b, kc.count});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// CocitationGraph

CocitationGraph::CocitationGraph(std::size_t universe_size, std::vector<NodeIndex> nodes,
                                 std::vector<CocitationEdge> edges)
    : universe_size_(universe_size), nodes_(std::move(nodes)), edges_(std::move(edges)),
      is_node_(universe_size, false) {
  if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
      std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw InputError("co-citation nodes must be strictly ascending");
  }
  for (NodeIndex v : nodes_) {
    if (v >= universe_size_) throw InputError(fmt::format("co-citation node {} outside universe", v));
    is_node_[v] = true;
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.a >= e.b) throw InputError(fmt::format("co-citation edge ({}, {}) not canonical", e.a, e.b));
    if (!is_node_[e.a] || !is_node_[e.b]) {
      throw InputError(fmt::format("co-citation edge ({}, {}) has an endpoint outside the node set", e.a, e.b));
    }
    if (i > 0 && std::pair(edges_[i - 1].a, edges_[i - 1].b) >= std::pair(e.a, e.b)) {
      throw InputError("co-citation edges must be sorted and unique");
    }
  }
  offsets_.assign(universe_size_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  for (std::size_t v = 0; v < universe_size_; ++v) offsets_[v + 1] += offsets_[v];
  incident_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    incident_[fill[edges_[i].a]++] = i;
    incident_[fill[edges_[i].b]++] = i;
  }
}

CocitationGraph normalize_salton(std::size_t universe_size, std::span<const NodeIndex> retained,
                                 std::vector<PairCount> pairs, const CitationCounts& counts) {
  std::vector<CocitationEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    const std::uint64_t ca = counts.at(p.a);
    const std::uint64_t cb = counts.at(p.b);
    if (ca == 0 || cb == 0) {
      throw DomainError(fmt::format("pair ({}, {}) has a zero-citation endpoint", p.a, p.b));
    }
    const double ncf = static_cast<double>(p.raw) / std::sqrt(static_cast<double>(ca) * static_cast<double>(cb));
    edges.push_back({p.a, p.b, p.raw, ncf});
  }
  return CocitationGraph(universe_size, std::vector<NodeIndex>(retained.begin(), retained.end()), std::move(edges));
}

std::string format_pair_dump(const CocitationGraph& graph, const Corpus& corpus) {
  std::string out = "a_pub_id\tb_pub_id\traw\tncf\n";
  for (const auto& e : graph.edges()) {
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}\n", corpus.pub_id(e.a), corpus.pub_id(e.b), e.raw,
                   format_double(e.ncf));
  }
  return out;
}

std::string format_retained(const CocitationGraph& graph, const Corpus& corpus, const CitationCounts& counts) {
  std::string out = "pub_id\tcitations\n";
  for (NodeIndex v : graph.nodes()) {
    fmt::format_to(std::back_inserter(out), "{}\t{}\n", corpus.pub_id(v), counts[v]);
  }
  return out;
}

CocitationGraph read_cocitation(const std::filesystem::path& retained_file, const std::filesystem::path& pairs_file,
                                const Corpus& corpus) {
  std::vector<NodeIndex> nodes;
  {
    auto in = open_input(retained_file);
    LineReader reader(in, retained_file.string());
    std::string_view line;
    while (reader.next(line)) {
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 2) reader.fail("expected pub_id<TAB>citations");
      if (reader.line_number() == 1 && fields[0] == "pub_id") continue;
      const auto v = corpus.index_of(fields[0]);
      if (!v) reader.fail(fmt::format("unknown pub_id {}", fields[0]));
      nodes.push_back(*v);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<CocitationEdge> edges;
  {
    auto in = open_input(pairs_file);
    LineReader reader(in, pairs_file.string());
    std::string_view line;
    while (reader.next(line)) {
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 4) reader.fail("expected a_pub_id<TAB>b_pub_id<TAB>raw<TAB>ncf");
      if (reader.line_number() == 1 && fields[0] == "a_pub_id") continue;
      const auto a = corpus.index_of(fields[0]);
      const auto b = corpus.index_of(fields[1]);
      if (!a || !b) reader.fail("unknown pub_id in pair");
      const auto raw = parse_integer<std::uint64_t>(fields[2]);
      const auto ncf = parse_double(fields[3]);
      if (!raw || !ncf) reader.fail("bad raw count or ncf");
      edges.push_back({std::min(*a, *b), std::max(*a, *b), *raw, *ncf});
    }
  }
  return CocitationGraph(corpus.size(), std::move(nodes), std::move(edges));
}

}  // namespace cocite
