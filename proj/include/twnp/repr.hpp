#ifndef TWNP_REPR_HPP
#define TWNP_REPR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twnp/conllu.hpp"
#include "twnp/nn.hpp"

namespace twnp {

// Deterministic string <-> index mapping; insertion order is the index order.
struct Vocab {
    std::vector<std::string> items;
    std::map<std::string, int> index;

    int add(const std::string& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        items.push_back(s);
        index[s] = static_cast<int>(items.size()) - 1;
        return static_cast<int>(items.size()) - 1;
    }
    int find(const std::string& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
    int size() const { return static_cast<int>(items.size()); }
};

std::string ascii_lower(const std::string& s);
std::vector<std::uint32_t> decode_utf8(const std::string& s);

// Word embedding matrix stored dim x V; column 0 is the trained UNK vector.
struct EmbeddingTable {
    Vocab vocab;  // item 0 = "<unk>"
    int slot = -1;
    int dim = 0;
    bool trainable = true;

    static EmbeddingTable build(ParamStore& store, const std::string& name,
                                const std::vector<std::string>& forms, int dim);

    // exact form, else lowercase form, else UNK (0)
    int index_of(const std::string& form) const;
};

Expr lookup_word(Graph& g, Expr table_param, const EmbeddingTable& table,
                 const std::string& form);

// Pretrained text embeddings: first line "count dim", then
// "form v1 ... vD" per line.
struct PretrainedEmbeddings {
    int dim = 0;
    std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
};
PretrainedEmbeddings load_embedding_text(const std::string& path);

// Single-layer BiLSTM over the code points of a form; the embedding is the
// concatenation of the final forward and backward states.
struct CharEncoder {
    std::map<std::uint32_t, int> chars;  // code point -> column; 0 = UNK
    int emb_slot = -1;
    LstmParams fwd, bwd;
    int emb_dim = 0, hidden = 0;

    static CharEncoder build(ParamStore& store, const std::string& name,
                             const std::vector<std::uint32_t>& alphabet,
                             int emb_dim, int hidden);
    int out_dim() const { return 2 * hidden; }
};

Expr char_embed(Graph& g, const CharEncoder& enc, const std::string& form);

// Softmax-weighted, gamma-scaled combination of layer vectors.
struct ScalarMix {
    int s_raw = -1;   // L x 1, zero-initialized (uniform weights)
    int gamma = -1;   // 1 x 1, initialized to 1
    int layers = 0;

    static ScalarMix create(ParamStore& store, const std::string& name, int layers);
};

Expr scalar_mix(Graph& g, const std::vector<Expr>& layers, const ScalarMix& mix);

// CTXV container of externally produced N x L x D sentence tensors.
struct ContextualStore {
    struct Entry {
        std::uint64_t forms_checksum = 0;
        std::uint32_t n = 0;
        std::vector<float> data;  // token-major, then layer, then dim
    };

    std::uint32_t layer_count = 0;  // L
    std::uint32_t dim = 0;          // D
    std::vector<std::string> keys;  // file order
    std::map<std::string, Entry> entries;

    static ContextualStore load(const std::string& path);
    void write(const std::string& path) const;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    // verifies N and the token-form checksum before handing out the tensor
    const Entry& get_verified(const std::string& key, const Sentence& sentence) const;
    // layer vector j of token k (both 0-based)
    Eigen::VectorXd layer_vector(const Entry& e, int token, int layer) const;
};

std::uint64_t forms_checksum(const Sentence& sentence);

}  // namespace twnp

#endif
