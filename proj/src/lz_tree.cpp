// Copyright 2026 The lzspa Authors.
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

#include "lzspa/lz_tree.hpp"

#include <zlib.h>

#if defined(__linux__)
#include <sys/mman.h>
#endif

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>

#include "bytes.hpp"

namespace lzspa {

namespace detail {

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes a uInt length; feed in chunks for very large buffers.
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t chunk = std::min<std::size_t>(data.size() - pos, 1u << 30);
    crc = ::crc32(crc, data.data() + pos, static_cast<uInt>(chunk));
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

namespace {
constexpr std::size_t kHugePage = std::size_t{2} << 20;
}  // namespace

void* allocate_node_storage(std::size_t bytes) {
  if (bytes >= kHugePage) {
    const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
    void* p = std::aligned_alloc(kHugePage, rounded);
    if (p == nullptr) throw std::bad_alloc();
#ifdef MADV_HUGEPAGE
    ::madvise(p, rounded, MADV_HUGEPAGE);
#endif
    return p;
  }
  return ::operator new(bytes, std::align_val_t{64});
}

void deallocate_node_storage(void* p, std::size_t bytes) noexcept {
  if (bytes >= kHugePage) {
    std::free(p);
  } else {
    ::operator delete(p, std::align_val_t{64});
  }
}

}  // namespace detail

namespace {

auto edge_lower_bound(EdgeList& edges, Symbol s) {
  return std::lower_bound(edges.begin(), edges.end(), s,
                          [](const Edge& e, Symbol v) { return e.symbol < v; });
}

}  // namespace

static_assert(sizeof(TreeNode) <= 64, "tree nodes should fit in a cache line");

EdgeList::EdgeList(const EdgeList& other) : size_(other.size_), capacity_(other.capacity_) {
  if (other.on_heap()) heap_ = new Edge[capacity_];
  std::copy(other.begin(), other.end(), data());
}

EdgeList::EdgeList(EdgeList&& other) noexcept : size_(other.size_), capacity_(other.capacity_) {
  if (other.on_heap()) {
    heap_ = other.heap_;
    other.capacity_ = kInline;
  } else {
    std::copy(other.inline_, other.inline_ + size_, inline_);
  }
  other.size_ = 0;
}

EdgeList& EdgeList::operator=(const EdgeList& other) {
  if (this != &other) *this = EdgeList(other);
  return *this;
}

EdgeList& EdgeList::operator=(EdgeList&& other) noexcept {
  if (this != &other) {
    release();
    new (this) EdgeList(std::move(other));
  }
  return *this;
}

void EdgeList::release() noexcept {
  if (on_heap()) delete[] heap_;
  capacity_ = kInline;
  size_ = 0;
}

EdgeList::iterator EdgeList::insert(const_iterator pos, const Edge& e) {
  const auto at = static_cast<std::size_t>(pos - begin());
  if (size_ == capacity_) {
    const std::uint32_t cap = capacity_ * 2;
    Edge* grown = new Edge[cap];
    std::copy(begin(), end(), grown);
    if (on_heap()) delete[] heap_;
    heap_ = grown;
    capacity_ = cap;
  }
  Edge* d = data();
  std::copy_backward(d + at, d + size_, d + size_ + 1);
  d[at] = e;
  ++size_;
  return d + at;
}

EdgeList::iterator EdgeList::erase(const_iterator pos) {
  const auto at = static_cast<std::size_t>(pos - begin());
  Edge* d = data();
  std::copy(d + at + 1, d + size_, d + at);
  --size_;
  return d + at;
}

LZ78Tree::LZ78Tree(Alphabet alphabet) : alphabet_(alphabet) { nodes_.emplace_back(); }

Edge* LZ78Tree::find_edge(NodeId node, Symbol s) {
  auto& edges = nodes_[node].edges;
  auto it = edge_lower_bound(edges, s);
  return (it != edges.end() && it->symbol == s) ? &*it : nullptr;
}

const Edge* LZ78Tree::find_edge(NodeId node, Symbol s) const {
  return const_cast<LZ78Tree*>(this)->find_edge(node, s);
}

NodeId LZ78Tree::add_child(NodeId parent, Symbol s, std::uint64_t count) {
  if (nodes_.size() >= std::numeric_limits<NodeId>::max()) {
    throw std::length_error("LZ78 tree node limit reached");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  TreeNode child;
  child.parent = parent;
  child.symbol = s;
  child.depth = nodes_[parent].depth + 1;
  nodes_.push_back(std::move(child));
  auto& edges = nodes_[parent].edges;
  edges.insert(edge_lower_bound(edges, s), Edge{s, id, count});
  nodes_[parent].visits += count;
  return id;
}

ParseStep LZ78Tree::parse_step(ParseCursor cursor, Symbol s, bool grow) {
  alphabet_.check(s);
  const NodeId context = cursor.node;
  if (!grow) return ParseStep{context, traverse(cursor, s), false};

  ++symbols_parsed_;
  if (Edge* e = find_edge(context, s)) {
    ++e->count;
    ++nodes_[context].visits;
    return ParseStep{context, ParseCursor{e->child, cursor.depth + 1}, false};
  }
  add_child(context, s, 1);
  return ParseStep{context, ParseCursor{}, true};
}

ParseCursor LZ78Tree::traverse(ParseCursor cursor, Symbol s) const {
  if (const Edge* e = find_edge(cursor.node, s)) return ParseCursor{e->child, cursor.depth + 1};
  return ParseCursor{};
}

std::optional<NodeId> LZ78Tree::child(NodeId node, Symbol s) const {
  if (const Edge* e = find_edge(node, s)) return e->child;
  return std::nullopt;
}

std::uint64_t LZ78Tree::count(NodeId node, Symbol s) const {
  const Edge* e = find_edge(node, s);
  return e ? e->count : 0;
}

std::vector<Symbol> LZ78Tree::phrase(NodeId id) const {
  std::vector<Symbol> out;
  for (NodeId cur = id; cur != kRootNode; cur = nodes_.at(cur).parent) {
    out.push_back(nodes_[cur].symbol);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Symbol>> LZ78Tree::phrases() const {
  std::vector<std::vector<Symbol>> out;
  out.reserve(nodes_.size() - 1);
  for (NodeId id = 1; id < nodes_.size(); ++id) out.push_back(phrase(id));
  return out;
}

std::vector<std::size_t> LZ78Tree::depth_histogram() const {
  std::vector<std::size_t> hist(max_depth() + 1, 0);
  for (const auto& n : nodes_) ++hist[n.depth];
  return hist;
}

std::size_t LZ78Tree::max_depth() const {
  std::uint32_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::size_t LZ78Tree::memory_bytes() const {
  std::size_t bytes = nodes_.capacity() * sizeof(TreeNode);
  for (const auto& n : nodes_) {
    if (n.edges.on_heap()) bytes += n.edges.capacity() * sizeof(Edge);
  }
  return bytes;
}

void LZ78Tree::revert_step(NodeId context, Symbol s, bool created_leaf) {
  auto& edges = nodes_.at(context).edges;
  auto it = edge_lower_bound(edges, s);
  if (it == edges.end() || it->symbol != s) throw std::logic_error("revert_step: no such edge");
  if (created_leaf) {
    if (it->child + 1 != nodes_.size() || it->count != 1 || !nodes_.back().edges.empty()) {
      throw std::logic_error("revert_step: leaf is not the most recent node");
    }
    edges.erase(it);
    nodes_.pop_back();
  } else {
    if (it->count == 0) throw std::logic_error("revert_step: count underflow");
    --it->count;
  }
  --nodes_[context].visits;
  --symbols_parsed_;
}

NodeId LZ78Tree::attach(NodeId parent, Symbol s, std::uint64_t count) {
  alphabet_.check(s);
  if (parent >= nodes_.size()) throw std::invalid_argument("attach: unknown parent");
  if (find_edge(parent, s)) throw std::invalid_argument("attach: duplicate edge");
  symbols_parsed_ += count;
  return add_child(parent, s, count);
}

bool operator==(const LZ78Tree& a, const LZ78Tree& b) {
  if (!(a.alphabet_ == b.alphabet_) || a.nodes_.size() != b.nodes_.size() ||
      a.symbols_parsed_ != b.symbols_parsed_) {
    return false;
  }
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.visits != y.visits || x.parent != y.parent || x.symbol != y.symbol ||
        x.depth != y.depth || x.edges.size() != y.edges.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.edges.size(); ++j) {
      if (x.edges[j].symbol != y.edges[j].symbol || x.edges[j].child != y.edges[j].child ||
          x.edges[j].count != y.edges[j].count) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<Symbol>> parse_recording_subsequences(LZ78Tree& tree,
                                                              std::span<const Symbol> tokens) {
  std::vector<std::vector<Symbol>> ys(tree.node_count());
  ParseCursor cursor;
  for (Symbol s : tokens) {
    const ParseStep step = tree.parse_step(cursor, s, /*grow=*/true);
    if (ys.size() < tree.node_count()) ys.resize(tree.node_count());
    ys[step.context].push_back(s);
    cursor = step.next;
  }
  ys.resize(tree.node_count());
  return ys;
}

double node_subsequence_entropy(const LZ78Tree& tree) {
  const std::uint64_t n = tree.symbols_parsed();
  if (n == 0) return 0.0;
  std::vector<std::uint64_t> counts;
  double total = 0.0;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& node = tree.node(id);
    if (node.visits == 0) continue;
    counts.clear();
    for (const auto& e : node.edges) counts.push_back(e.count);
    total += static_cast<double>(node.visits) * entropy_of_counts(counts);
  }
  return total / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

const char* to_string(FormatErrc code) {
  switch (code) {
    case FormatErrc::kVersion:
      return "unrecognized format or version";
    case FormatErrc::kTruncated:
      return "truncated stream";
    case FormatErrc::kChecksum:
      return "checksum mismatch";
    case FormatErrc::kCorrupt:
      return "corrupt data";
    case FormatErrc::kUnsupported:
      return "unsupported content";
  }
  return "format error";
}

namespace {

constexpr char kModelMagic[4] = {'L', 'Z', 'S', 'P'};

}  // namespace

std::vector<std::uint8_t> serialize_tree(const LZ78Tree& tree, const ModelMetadata& meta) {
  if (meta.kind == SpaKind::kCustom) {
    throw FormatError(FormatErrc::kUnsupported, "custom inner SPA families cannot be saved");
  }
  detail::ByteWriter w;
  w.raw(kModelMagic, 4);
  w.u16(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(meta.kind));
  w.u8(meta.frozen ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(tree.alphabet().size()));
  w.f64(meta.gamma);
  w.u64(meta.epochs);
  w.u64(tree.symbols_parsed());
  w.u64(tree.node_count());
  for (NodeId id = 1; id < tree.node_count(); ++id) {
    const auto& node = tree.node(id);
    w.u32(node.parent);
    w.u32(node.symbol);
    w.u64(tree.count(node.parent, node.symbol));
  }
  const std::uint32_t crc = detail::crc32(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

LoadedTree deserialize_tree(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kModelMagic, 4) != 0) {
    throw FormatError(FormatErrc::kVersion, "not an lzspa model file");
  }
  const std::uint16_t version = r.u16();
  if (version != kModelFormatVersion) {
    throw FormatError(FormatErrc::kVersion, "model format version " + std::to_string(version));
  }
  ModelMetadata meta;
  const std::uint8_t kind = r.u8();
  const std::uint8_t frozen = r.u8();
  const std::uint32_t alphabet_size = r.u32();
  meta.gamma = r.f64();
  meta.epochs = r.u64();
  const std::uint64_t symbols = r.u64();
  const std::uint64_t node_count = r.u64();

  constexpr std::size_t kNodeBytes = 16;
  if (node_count == 0) throw FormatError(FormatErrc::kCorrupt, "model without a root node");
  if (r.remaining() < 4 || (r.remaining() - 4) / kNodeBytes < node_count - 1) {
    throw FormatError(FormatErrc::kTruncated, "node array shorter than declared");
  }
  const std::size_t body_end = r.position() + (node_count - 1) * kNodeBytes;
  const auto body = bytes.first(body_end);
  const std::uint32_t stored_crc = detail::ByteReader(bytes.subspan(body_end, 4)).u32();
  if (detail::crc32(body) != stored_crc) {
    throw FormatError(FormatErrc::kChecksum, "model checksum mismatch");
  }
  if (bytes.size() != body_end + 4) throw FormatError(FormatErrc::kCorrupt, "trailing bytes");

  if (kind != static_cast<std::uint8_t>(SpaKind::kDirichlet) &&
      kind != static_cast<std::uint8_t>(SpaKind::kUniform)) {
    throw FormatError(FormatErrc::kCorrupt, "unknown inner SPA kind");
  }
  meta.kind = static_cast<SpaKind>(kind);
  meta.frozen = frozen != 0;
  if (alphabet_size < 2) throw FormatError(FormatErrc::kCorrupt, "alphabet size below 2");
  if (meta.kind == SpaKind::kDirichlet && !(meta.gamma > 0.0)) {
    throw FormatError(FormatErrc::kCorrupt, "non-positive gamma");
  }

  LZ78Tree tree{Alphabet(alphabet_size)};
  try {
    for (std::uint64_t id = 1; id < node_count; ++id) {
      const std::uint32_t parent = r.u32();
      const std::uint32_t symbol = r.u32();
      const std::uint64_t count = r.u64();
      if (parent >= id || count == 0) throw FormatError(FormatErrc::kCorrupt, "bad node record");
      tree.attach(parent, symbol, count);
    }
  } catch (const std::invalid_argument& e) {
    throw FormatError(FormatErrc::kCorrupt, e.what());
  }
  if (tree.symbols_parsed() != symbols) {
    throw FormatError(FormatErrc::kCorrupt, "symbol total does not match node counts");
  }
  return LoadedTree{std::move(tree), meta};
}

}  // namespace lzspa
