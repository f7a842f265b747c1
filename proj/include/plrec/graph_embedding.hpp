#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plrec/data_ingest.hpp"
#include "plrec/matrix.hpp"
#include "plrec/tfidf.hpp"

namespace plrec {

enum class NodeKind { User, Item };

struct NodeRef {
    NodeKind kind = NodeKind::User;
    std::string id;
};

// "user:<id>" / "item:<id>"
std::string node_key(const NodeRef& node);

// Bipartite user-item graph; edge weight = summed ratings for that pair.
struct InteractionGraph {
    struct Edge {
        std::size_t neighbor = 0;
        double weight = 0.0;
    };
    std::vector<NodeRef> nodes;               // index order = first appearance
    std::vector<std::vector<Edge>> adjacency; // sorted by neighbor index

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const;
    bool is_bipartite() const;
};

struct WalkCorpus {
    std::vector<std::vector<std::size_t>> walks;
    int walk_length = 0;
    int walks_per_node = 0;
    std::uint64_t seed = 0;
    std::size_t num_nodes = 0;
};

struct EmbeddingTable {
    std::map<std::string, std::vector<double>> node_to_vector;
    std::size_t rank = 0;
};

struct EmbeddingParams {
    int walks_per_node = 10;
    int walk_length = 8;
    int window = 2;
    std::size_t rank = 64;
    int iterations = 100;
    std::uint64_t seed = 0;
};

InteractionGraph build_interaction_graph(const std::vector<ReviewRecord>& records);

// Weighted random walks, walks_per_node per start node, at most walk_length
// nodes each; every (node, walk) pair draws from its own derived sub-seed so
// the parallel kernel is schedule-independent.
WalkCorpus sample_walks(const InteractionGraph& graph, int walks_per_node, int walk_length,
                        std::uint64_t seed);
WalkCorpus sample_walks_serial(const InteractionGraph& graph, int walks_per_node,
                               int walk_length, std::uint64_t seed);

// Symmetric positive pointwise mutual information over windowed pair counts.
Matrix cooccurrence_ppmi(const WalkCorpus& walks, int window);

// Top-rank eigenpairs by orthogonal iteration with a Rayleigh-Ritz finish;
// row i of the result is node i's embedding, columns scaled by sqrt(max(l,0)).
Matrix factorize_ppmi(const Matrix& matrix, std::size_t rank, int iterations,
                      std::uint64_t seed);

// Eigenvalue estimates for the factorization path (same routine, values only).
std::vector<double> top_eigenvalues(const Matrix& matrix, std::size_t rank, int iterations,
                                    std::uint64_t seed);

EmbeddingTable build_embedding_table(const InteractionGraph& graph, const Matrix& embeddings);

// Full chain: graph -> walks -> PPMI -> factorization -> table.
EmbeddingTable fit_node_embeddings(const InteractionGraph& graph, const EmbeddingParams& params);

// Stored embedding, or the zero vector for unseen (cold) items.
std::vector<double> item_feature(const std::string& item_id, const EmbeddingTable& table,
                                 std::size_t rank);

FeatureVector concat_features(const FeatureVector& tfidf, const std::vector<double>& graph_feat);

void save_embeddings(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace plrec
