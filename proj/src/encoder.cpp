#include "twnp/encoder.hpp"

namespace twnp {

Representations Representations::build(ParamStore& store, const ModelConfig& cfg,
                                       const std::vector<std::string>& forms,
                                       const std::vector<std::uint32_t>& alphabet) {
    Representations repr;
    repr.words = EmbeddingTable::build(store, "emb.word", forms, cfg.word_dim);
    repr.chars = CharEncoder::build(store, "emb.char", alphabet, cfg.char_emb_dim,
                                    cfg.char_hidden);
    if (cfg.use_ctx) repr.mix = ScalarMix::create(store, "ctx.mix", cfg.mix_layers());
    return repr;
}

std::vector<Expr> token_vectors(Graph& g, const Sentence& sentence,
                                const Representations& repr, const ModelConfig& cfg,
                                const ContextualStore* ctx, const std::string& key) {
    const ContextualStore::Entry* entry = nullptr;
    if (cfg.use_ctx) {
        if (!ctx) throw std::runtime_error("model needs a contextual vector store");
        if (cfg.layer_lo < 0 || cfg.layer_hi >= static_cast<int>(ctx->layer_count) ||
            cfg.layer_lo > cfg.layer_hi)
            throw std::runtime_error("layer range out of bounds for vector store");
        entry = &ctx->get_verified(key, sentence);
    }
    Expr word_table = g.param(repr.words.slot);
    std::vector<Expr> out;
    out.reserve(sentence.tokens.size());
    for (std::size_t k = 0; k < sentence.tokens.size(); ++k) {
        const Token& tok = sentence.tokens[k];
        std::vector<Expr> parts{lookup_word(g, word_table, repr.words, tok.form),
                                char_embed(g, repr.chars, tok.form)};
        if (entry) {
            std::vector<Expr> layers;
            for (int j = cfg.layer_lo; j <= cfg.layer_hi; ++j)
                layers.push_back(g.input(ctx->layer_vector(*entry, static_cast<int>(k), j)));
            parts.push_back(scalar_mix(g, layers, repr.mix));
        }
        out.push_back(g.concat_rows(parts));
    }
    return out;
}

SentenceEncoder SentenceEncoder::create(ParamStore& store, const ModelConfig& cfg) {
    SentenceEncoder enc;
    enc.rnn = BiLstmParams::create(store, "enc", cfg.enc_layers, cfg.token_dim(),
                                   cfg.enc_hidden, cfg.dropout);
    enc.root_input = store.add("enc.root_input", cfg.token_dim(), 1);
    enc.pad = store.add("enc.pad", cfg.enc_out(), 1);
    return enc;
}

EncodedSentence encode(Graph& g, const std::vector<Expr>& tokens,
                       const SentenceEncoder& enc) {
    if (tokens.empty()) throw std::runtime_error("encode on empty sentence");
    std::vector<Expr> seq = tokens;
    seq.push_back(g.param(enc.root_input));  // ROOT rides at the buffer end
    auto out = bilstm(g, seq, enc.rnn);
    EncodedSentence encoded;
    encoded.vectors.reserve(out.size());
    encoded.vectors.push_back(out.back());
    for (std::size_t i = 0; i + 1 < out.size(); ++i) encoded.vectors.push_back(out[i]);
    encoded.pad = g.param(enc.pad);
    return encoded;
}

}  // namespace twnp
