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

#ifndef LZSPA_LZ_TREE_HPP_
#define LZSPA_LZ_TREE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

namespace lzspa {

using NodeId = std::uint32_t;
inline constexpr NodeId kRootNode = 0;

// Outgoing edge of a node. `count` is the number of times `symbol` was parsed
// while the node was the active context, i.e. N_LZ(symbol | node).
struct Edge {
  Symbol symbol;
  NodeId child;
  std::uint64_t count;
};

// Sorted edge list holding up to two edges inline, so nodes of binary trees
// never touch the heap and a node fits in one cache line.
class EdgeList {
 public:
  using iterator = Edge*;
  using const_iterator = const Edge*;

  EdgeList() noexcept {}
  EdgeList(const EdgeList& other);
  EdgeList(EdgeList&& other) noexcept;
  EdgeList& operator=(const EdgeList& other);
  EdgeList& operator=(EdgeList&& other) noexcept;
  ~EdgeList() { release(); }

  iterator begin() noexcept { return data(); }
  iterator end() noexcept { return data() + size_; }
  const_iterator begin() const noexcept { return data(); }
  const_iterator end() const noexcept { return data() + size_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t capacity() const noexcept { return capacity_; }
  bool on_heap() const noexcept { return capacity_ > kInline; }
  Edge& operator[](std::size_t i) noexcept { return data()[i]; }
  const Edge& operator[](std::size_t i) const noexcept { return data()[i]; }

  iterator insert(const_iterator pos, const Edge& e);
  iterator erase(const_iterator pos);

 private:
  static constexpr std::uint32_t kInline = 2;

  Edge* data() noexcept { return on_heap() ? heap_ : inline_; }
  const Edge* data() const noexcept { return on_heap() ? heap_ : inline_; }
  void release() noexcept;

  union {
    Edge inline_[kInline];
    Edge* heap_;
  };
  std::uint32_t size_ = 0;
  std::uint32_t capacity_ = kInline;
};

namespace detail {

// Node storage for large trees asks the kernel for transparent huge pages;
// parsing is a chain of dependent random reads, so TLB reach matters.
void* allocate_node_storage(std::size_t bytes);
void deallocate_node_storage(void* p, std::size_t bytes) noexcept;

template <typename T>
struct NodeAllocator {
  using value_type = T;
  NodeAllocator() = default;
  template <typename U>
  NodeAllocator(const NodeAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(allocate_node_storage(n * sizeof(T))); }
  void deallocate(T* p, std::size_t n) noexcept { deallocate_node_storage(p, n * sizeof(T)); }
  friend bool operator==(const NodeAllocator&, const NodeAllocator&) { return true; }
};

}  // namespace detail

struct TreeNode {
  EdgeList edges;  // sorted by symbol
  std::uint64_t visits = 0;  // length of the node's context subsequence
  NodeId parent = kRootNode;
  Symbol symbol = 0;  // label of the edge from the parent
  std::uint32_t depth = 0;
};

// The active LZ78 context while parsing.
struct ParseCursor {
  NodeId node = kRootNode;
  std::uint32_t depth = 0;

  friend bool operator==(const ParseCursor&, const ParseCursor&) = default;
};

struct ParseStep {
  NodeId context;  // node at which the symbol was parsed
  ParseCursor next;
  bool created_leaf;
};

// LZ78 incremental-parsing prefix tree.
//
// Parsing a symbol at node z records it in z's counts. If z already has a
// child for the symbol the cursor descends, otherwise a leaf is added (when
// growing) and the cursor returns to the root, closing the phrase.
class LZ78Tree {
 public:
  explicit LZ78Tree(Alphabet alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }

  ParseStep parse_step(ParseCursor cursor, Symbol s, bool grow);

  // Read-only traversal: descend if the child exists, else back to the root.
  ParseCursor traverse(ParseCursor cursor, Symbol s) const;

  std::optional<NodeId> child(NodeId node, Symbol s) const;
  std::uint64_t count(NodeId node, Symbol s) const;
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }

  // Number of nodes including the root. This is the LZ78 phrase count
  // C(x^n) in the convention that counts the root as a phrase; the number of
  // completed phrases is node_count() - 1.
  std::size_t node_count() const noexcept { return nodes_.size(); }
  void reserve(std::size_t nodes) { nodes_.reserve(nodes); }
  std::size_t phrase_count() const noexcept { return nodes_.size(); }
  std::uint64_t symbols_parsed() const noexcept { return symbols_parsed_; }

  std::vector<Symbol> phrase(NodeId id) const;
  // Phrases of all non-root nodes, in creation order.
  std::vector<std::vector<Symbol>> phrases() const;
  std::vector<std::size_t> depth_histogram() const;
  std::size_t max_depth() const;
  std::size_t memory_bytes() const;

  // Undoes a parse_step(.., grow=true) that happened at `context`. Steps must
  // be reverted in reverse order.
  void revert_step(NodeId context, Symbol s, bool created_leaf);

  // Appends a node with the given edge count; used when loading a tree.
  NodeId attach(NodeId parent, Symbol s, std::uint64_t count);

  friend bool operator==(const LZ78Tree& a, const LZ78Tree& b);

 private:
  Edge* find_edge(NodeId node, Symbol s);
  const Edge* find_edge(NodeId node, Symbol s) const;
  NodeId add_child(NodeId parent, Symbol s, std::uint64_t count);

  Alphabet alphabet_;
  std::vector<TreeNode, detail::NodeAllocator<TreeNode>> nodes_;
  std::uint64_t symbols_parsed_ = 0;
};

// Parses `tokens` from the root (growing the tree) and returns, for every
// node id, the ordered subsequence Y{x^n, z} of symbols parsed at that node.
std::vector<std::vector<Symbol>> parse_recording_subsequences(LZ78Tree& tree,
                                                              std::span<const Symbol> tokens);

// (1/n) * sum_z |Y{x^n,z}| * mu_0(Y{x^n,z}), computed from tree counts.
double node_subsequence_entropy(const LZ78Tree& tree);

// ---------------------------------------------------------------------------
// Model file (.lzspa) serialization.

enum class FormatErrc { kVersion, kTruncated, kChecksum, kCorrupt, kUnsupported };

const char* to_string(FormatErrc code);

class FormatError : public std::runtime_error {
 public:
  FormatError(FormatErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

struct ModelMetadata {
  SpaKind kind = SpaKind::kDirichlet;
  double gamma = 0.5;
  std::uint64_t epochs = 0;
  bool frozen = false;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

inline constexpr std::uint16_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_tree(const LZ78Tree& tree, const ModelMetadata& meta);

struct LoadedTree {
  LZ78Tree tree;
  ModelMetadata meta;
};

LoadedTree deserialize_tree(std::span<const std::uint8_t> bytes);

}  // namespace lzspa

#endif  // LZSPA_LZ_TREE_HPP_
