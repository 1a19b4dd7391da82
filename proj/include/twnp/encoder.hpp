#ifndef TWNP_ENCODER_HPP
#define TWNP_ENCODER_HPP

#include "twnp/repr.hpp"

namespace twnp {

struct ModelConfig {
    int word_dim = 300;
    int char_emb_dim = 50;
    int char_hidden = 100;  // per direction
    int enc_hidden = 125;   // per direction
    int enc_layers = 2;
    int mlp_hidden = 100;
    double dropout = 0.33;
    bool use_ctx = false;
    int ctx_dim = 0;
    int layer_lo = 0, layer_hi = 0;  // inclusive range into the stored layers

    int mix_layers() const { return layer_hi - layer_lo + 1; }
    int token_dim() const {
        return word_dim + 2 * char_hidden + (use_ctx ? ctx_dim : 0);
    }
    int enc_out() const { return 2 * enc_hidden; }
};

// Trained input features: fine-tuned word embeddings, char BiLSTM, and the
// scalar mix over externally supplied contextual layers.
struct Representations {
    EmbeddingTable words;
    CharEncoder chars;
    ScalarMix mix;  // meaningful only when the config uses a vector store

    static Representations build(ParamStore& store, const ModelConfig& cfg,
                                 const std::vector<std::string>& forms,
                                 const std::vector<std::uint32_t>& alphabet);
};

// One vector per token: concat(word, char [, mix of ctx layers]).
std::vector<Expr> token_vectors(Graph& g, const Sentence& sentence,
                                const Representations& repr, const ModelConfig& cfg,
                                const ContextualStore* ctx, const std::string& key);

// Two-layer BiLSTM over the token vectors plus a trained ROOT input vector at
// the end of the sequence; the ROOT output is surfaced at index 0.
struct SentenceEncoder {
    BiLstmParams rnn;
    int root_input = -1;  // token_dim x 1
    int pad = -1;         // enc_out x 1, the stand-in for absent feature slots

    static SentenceEncoder create(ParamStore& store, const ModelConfig& cfg);
};

struct EncodedSentence {
    std::vector<Expr> vectors;  // index 0 = ROOT, 1..N = tokens
    Expr pad = -1;
};

EncodedSentence encode(Graph& g, const std::vector<Expr>& tokens,
                       const SentenceEncoder& enc);

}  // namespace twnp

#endif
