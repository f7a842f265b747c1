#include "plrec/graph_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "plrec/parallel.hpp"
#include "plrec/rng.hpp"

namespace plrec {

std::string node_key(const NodeRef& node) {
    return (node.kind == NodeKind::User ? "user:" : "item:") + node.id;
}

std::size_t InteractionGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency) twice += adj.size();
    return twice / 2;
}

bool InteractionGraph::is_bipartite() const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& e : adjacency[i]) {
            if (nodes[i].kind == nodes[e.neighbor].kind) return false;
        }
    }
    return true;
}

InteractionGraph build_interaction_graph(const std::vector<ReviewRecord>& records) {
    InteractionGraph graph;
    std::map<std::string, std::size_t> user_index;
    std::map<std::string, std::size_t> item_index;

    auto intern = [&](NodeKind kind, const std::string& id) {
        auto& index = (kind == NodeKind::User) ? user_index : item_index;
        auto it = index.find(id);
        if (it != index.end()) return it->second;
        const std::size_t node = graph.nodes.size();
        graph.nodes.push_back({kind, id});
        graph.adjacency.emplace_back();
        index.emplace(id, node);
        return node;
    };

    std::map<std::pair<std::size_t, std::size_t>, double> weights;
    for (const auto& r : records) {
        const std::size_t u = intern(NodeKind::User, r.user_id);
        const std::size_t i = intern(NodeKind::Item, r.item_id);
        weights[{u, i}] += r.rating;
    }
    for (const auto& [pair, w] : weights) {
        graph.adjacency[pair.first].push_back({pair.second, w});
        graph.adjacency[pair.second].push_back({pair.first, w});
    }
    for (auto& adj : graph.adjacency) {
        std::sort(adj.begin(), adj.end(),
                  [](const auto& x, const auto& y) { return x.neighbor < y.neighbor; });
    }
    return graph;
}

namespace {

std::vector<std::size_t> walk_from(const InteractionGraph& graph, std::size_t start,
                                   int walk_length, Rng& rng) {
    std::vector<std::size_t> walk;
    walk.reserve(static_cast<std::size_t>(walk_length));
    walk.push_back(start);
    std::size_t current = start;
    while (walk.size() < static_cast<std::size_t>(walk_length)) {
        const auto& adj = graph.adjacency[current];
        if (adj.empty()) break;  // isolated node: length-1 walk
        double total = 0.0;
        for (const auto& e : adj) total += e.weight;
        const double pick = rng.next_double() * total;
        double cum = 0.0;
        std::size_t next = adj.back().neighbor;
        for (const auto& e : adj) {
            cum += e.weight;
            if (pick < cum) {
                next = e.neighbor;
                break;
            }
        }
        walk.push_back(next);
        current = next;
    }
    return walk;
}

template <class ForLoop>
WalkCorpus sample_walks_impl(const InteractionGraph& graph, int walks_per_node,
                             int walk_length, std::uint64_t seed, ForLoop&& loop) {
    if (walk_length < 1) throw std::domain_error("sample_walks: walk_length < 1");
    if (walks_per_node < 1) throw std::domain_error("sample_walks: walks_per_node < 1");

    WalkCorpus corpus;
    corpus.walk_length = walk_length;
    corpus.walks_per_node = walks_per_node;
    corpus.seed = seed;
    corpus.num_nodes = graph.node_count();

    const std::size_t per = static_cast<std::size_t>(walks_per_node);
    corpus.walks.resize(graph.node_count() * per);
    loop(graph.node_count() * per, [&](std::size_t slot) {
        const std::size_t node = slot / per;
        const std::size_t repeat = slot % per;
        Rng rng(Rng::derive(seed, node, repeat));
        corpus.walks[slot] = walk_from(graph, node, walk_length, rng);
    });
    return corpus;
}

}  // namespace

WalkCorpus sample_walks(const InteractionGraph& graph, int walks_per_node, int walk_length,
                        std::uint64_t seed) {
    return sample_walks_impl(graph, walks_per_node, walk_length, seed,
                             [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

WalkCorpus sample_walks_serial(const InteractionGraph& graph, int walks_per_node,
                               int walk_length, std::uint64_t seed) {
    return sample_walks_impl(graph, walks_per_node, walk_length, seed,
                             [](std::size_t n, auto&& body) { serial_for(n, body); });
}

Matrix cooccurrence_ppmi(const WalkCorpus& walks, int window) {
    if (window < 1) throw std::domain_error("cooccurrence_ppmi: window < 1");
    const std::size_t n = walks.num_nodes;
    Matrix counts(n, n);
    double total = 0.0;
    for (const auto& walk : walks.walks) {
        const std::size_t len = walk.size();
        for (std::size_t center = 0; center < len; ++center) {
            const std::size_t hi =
                std::min(len, center + static_cast<std::size_t>(window) + 1);
            for (std::size_t ctx = center + 1; ctx < hi; ++ctx) {
                // symmetric by construction: both ordered pairs counted
                counts(walk[center], walk[ctx]) += 1.0;
                counts(walk[ctx], walk[center]) += 1.0;
                total += 2.0;
            }
        }
    }
    if (total == 0.0) return Matrix(n, n);

    std::vector<double> marginal(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) marginal[i] += counts(i, j);

    Matrix ppmi(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = counts(i, j);
            if (c <= 0.0) continue;
            const double value = std::log(c * total / (marginal[i] * marginal[j]));
            ppmi(i, j) = std::max(0.0, value);
        }
    }
    return ppmi;
}

namespace {

// Modified Gram-Schmidt; zero columns (rank deficiency) stay zero.
void orthonormalize_columns(Matrix& q) {
    for (std::size_t k = 0; k < q.cols; ++k) {
        for (std::size_t prev = 0; prev < k; ++prev) {
            double dot = 0.0;
            for (std::size_t i = 0; i < q.rows; ++i) dot += q(i, k) * q(i, prev);
            for (std::size_t i = 0; i < q.rows; ++i) q(i, k) -= dot * q(i, prev);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < q.rows; ++i) norm += q(i, k) * q(i, k);
        norm = std::sqrt(norm);
        if (norm < 1e-14) {
            for (std::size_t i = 0; i < q.rows; ++i) q(i, k) = 0.0;
            continue;
        }
        for (std::size_t i = 0; i < q.rows; ++i) q(i, k) /= norm;
    }
}

// Largest-magnitude entry positive; makes seeded runs comparable across ranks.
void canonicalize_column_signs(Matrix& m) {
    for (std::size_t k = 0; k < m.cols; ++k) {
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < m.rows; ++i) {
            const double mag = std::fabs(m(i, k));
            if (mag > best + 1e-15) {
                best = mag;
                pivot = i;
            }
        }
        if (m(pivot, k) < 0.0) {
            for (std::size_t i = 0; i < m.rows; ++i) m(i, k) = -m(i, k);
        }
    }
}

struct RitzResult {
    std::vector<double> values;
    Matrix vectors;  // n x rank
};

RitzResult orthogonal_iteration(const Matrix& matrix, std::size_t rank, int iterations,
                                std::uint64_t seed) {
    if (matrix.rows != matrix.cols) {
        throw std::domain_error("factorize_ppmi: matrix not square");
    }
    if (rank > matrix.rows) throw std::domain_error("factorize_ppmi: rank exceeds size");
    if (max_abs_asymmetry(matrix) > 1e-9) {
        throw std::domain_error("factorize_ppmi: matrix not symmetric");
    }

    const std::size_t n = matrix.rows;
    RitzResult out;
    out.values.assign(rank, 0.0);
    out.vectors = Matrix(n, rank);
    if (rank == 0 || n == 0) return out;

    Rng rng(seed);
    Matrix q(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < rank; ++k) q(i, k) = rng.uniform(-1.0, 1.0);
    orthonormalize_columns(q);

    for (int iter = 0; iter < iterations; ++iter) {
        q = matmul(matrix, q);
        orthonormalize_columns(q);
    }

    // Rayleigh-Ritz on the converged block.
    Matrix projected = matmul(transpose(q), matmul(matrix, q));
    // Symmetrize away round-off before the Jacobi solve.
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = i + 1; j < rank; ++j) {
            const double avg = 0.5 * (projected(i, j) + projected(j, i));
            projected(i, j) = avg;
            projected(j, i) = avg;
        }
    }
    EigenDecomposition small = jacobi_eigen(projected);
    out.values = small.values;
    out.vectors = matmul(q, small.vectors);
    canonicalize_column_signs(out.vectors);
    return out;
}

}  // namespace

Matrix factorize_ppmi(const Matrix& matrix, std::size_t rank, int iterations,
                      std::uint64_t seed) {
    RitzResult ritz = orthogonal_iteration(matrix, rank, iterations, seed);
    Matrix embeddings(matrix.rows, rank);
    for (std::size_t k = 0; k < rank; ++k) {
        const double scale = std::sqrt(std::max(ritz.values[k], 0.0));
        for (std::size_t i = 0; i < matrix.rows; ++i) {
            embeddings(i, k) = ritz.vectors(i, k) * scale;
        }
    }
    return embeddings;
}

std::vector<double> top_eigenvalues(const Matrix& matrix, std::size_t rank, int iterations,
                                    std::uint64_t seed) {
    return orthogonal_iteration(matrix, rank, iterations, seed).values;
}

EmbeddingTable build_embedding_table(const InteractionGraph& graph, const Matrix& embeddings) {
    if (graph.node_count() != embeddings.rows) {
        throw std::domain_error("build_embedding_table: row count mismatch");
    }
    EmbeddingTable table;
    table.rank = embeddings.cols;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        std::vector<double> row(embeddings.cols);
        for (std::size_t k = 0; k < embeddings.cols; ++k) row[k] = embeddings(i, k);
        table.node_to_vector.emplace(node_key(graph.nodes[i]), std::move(row));
    }
    return table;
}

EmbeddingTable fit_node_embeddings(const InteractionGraph& graph, const EmbeddingParams& params) {
    if (graph.node_count() == 0) {
        EmbeddingTable empty;
        empty.rank = params.rank;
        return empty;
    }
    const std::size_t rank = std::min(params.rank, graph.node_count());
    WalkCorpus walks =
        sample_walks(graph, params.walks_per_node, params.walk_length, params.seed);
    Matrix ppmi = cooccurrence_ppmi(walks, params.window);
    Matrix embeddings =
        factorize_ppmi(ppmi, rank, params.iterations, Rng::derive(params.seed, 0x9e37, rank));
    if (rank < params.rank) {
        // Tiny graphs cannot support the full rank; pad columns with zeros so
        // downstream feature dimensions stay fixed.
        Matrix padded(embeddings.rows, params.rank);
        for (std::size_t i = 0; i < embeddings.rows; ++i)
            for (std::size_t k = 0; k < rank; ++k) padded(i, k) = embeddings(i, k);
        embeddings = std::move(padded);
    }
    return build_embedding_table(graph, embeddings);
}

std::vector<double> item_feature(const std::string& item_id, const EmbeddingTable& table,
                                 std::size_t rank) {
    auto it = table.node_to_vector.find("item:" + item_id);
    if (it == table.node_to_vector.end()) return std::vector<double>(rank, 0.0);
    if (it->second.size() != rank) {
        throw std::domain_error("item_feature: rank mismatch with table");
    }
    return it->second;
}

FeatureVector concat_features(const FeatureVector& tfidf, const std::vector<double>& graph_feat) {
    FeatureVector out;
    out.reserve(tfidf.size() + graph_feat.size());
    out.insert(out.end(), tfidf.begin(), tfidf.end());
    out.insert(out.end(), graph_feat.begin(), graph_feat.end());
    return out;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "gemb v1 " << table.node_to_vector.size() << ' ' << table.rank << '\n';
    for (const auto& [key, vec] : table.node_to_vector) {
        out << key;
        for (std::size_t k = 0; k < vec.size(); ++k) {
            out << (k == 0 ? '\t' : ' ') << format_sig(vec[k], 9);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    std::string magic, version;
    std::size_t n = 0, rank = 0;
    in >> magic >> version >> n >> rank;
    if (magic != "gemb" || version != "v1" || !in) {
        throw std::runtime_error("not a gemb v1 file: " + path);
    }
    std::string rest;
    std::getline(in, rest);

    EmbeddingTable table;
    table.rank = rank;
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated gemb file: " + path);
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("malformed gemb row: " + line);
        std::istringstream values(line.substr(tab + 1));
        std::vector<double> vec(rank);
        for (auto& v : vec) {
            if (!(values >> v)) throw std::runtime_error("malformed gemb row: " + line);
        }
        table.node_to_vector.emplace(line.substr(0, tab), std::move(vec));
    }
    return table;
}

}  // namespace plrec
