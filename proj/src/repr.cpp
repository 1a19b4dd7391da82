#include "twnp/repr.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace twnp {

std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::vector<std::uint32_t> decode_utf8(const std::string& s) {
    std::vector<std::uint32_t> cps;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b = static_cast<unsigned char>(s[i]);
        std::uint32_t cp = b;
        int extra = 0;
        if (b >= 0xF0) { cp = b & 0x07u; extra = 3; }
        else if (b >= 0xE0) { cp = b & 0x0Fu; extra = 2; }
        else if (b >= 0xC0) { cp = b & 0x1Fu; extra = 1; }
        ++i;
        for (int k = 0; k < extra && i < s.size(); ++k, ++i) {
            const unsigned char cont = static_cast<unsigned char>(s[i]);
            if ((cont & 0xC0u) != 0x80u) break;
            cp = (cp << 6) | (cont & 0x3Fu);
        }
        cps.push_back(cp);
    }
    return cps;
}

EmbeddingTable EmbeddingTable::build(ParamStore& store, const std::string& name,
                                     const std::vector<std::string>& forms, int dim) {
    EmbeddingTable table;
    table.dim = dim;
    table.vocab.add("<unk>");
    for (const auto& f : forms) table.vocab.add(f);
    table.slot = store.add(name, dim, table.vocab.size());
    return table;
}

int EmbeddingTable::index_of(const std::string& form) const {
    int idx = vocab.find(form);
    if (idx >= 0) return idx;
    idx = vocab.find(ascii_lower(form));
    return idx >= 0 ? idx : 0;
}

Expr lookup_word(Graph& g, Expr table_param, const EmbeddingTable& table,
                 const std::string& form) {
    return g.gather_cols(table_param, {table.index_of(form)});
}

PretrainedEmbeddings load_embedding_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings " + path);
    PretrainedEmbeddings result;
    std::size_t count = 0;
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty embedding file");
    {
        std::istringstream hs(header);
        if (!(hs >> count >> result.dim) || result.dim <= 0)
            throw std::runtime_error("bad embedding header '" + header + "'");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string form;
        ls >> form;
        Eigen::VectorXd v(result.dim);
        for (int i = 0; i < result.dim; ++i)
            if (!(ls >> v(i)))
                throw std::runtime_error("short embedding row for '" + form + "'");
        result.rows.emplace_back(form, std::move(v));
    }
    if (result.rows.size() != count)
        throw std::runtime_error("embedding count mismatch in " + path);
    return result;
}

CharEncoder CharEncoder::build(ParamStore& store, const std::string& name,
                               const std::vector<std::uint32_t>& alphabet,
                               int emb_dim, int hidden) {
    CharEncoder enc;
    enc.emb_dim = emb_dim;
    enc.hidden = hidden;
    enc.chars[0] = 0;  // UNK
    for (std::uint32_t cp : alphabet)
        if (!enc.chars.count(cp))
            enc.chars[cp] = static_cast<int>(enc.chars.size());
    enc.emb_slot = store.add(name + ".emb", emb_dim, static_cast<int>(enc.chars.size()));
    enc.fwd = LstmParams::create(store, name + ".fwd", emb_dim, hidden);
    enc.bwd = LstmParams::create(store, name + ".bwd", emb_dim, hidden);
    return enc;
}

Expr char_embed(Graph& g, const CharEncoder& enc, const std::string& form) {
    if (form.empty()) throw std::runtime_error("char_embed on empty form");
    std::vector<int> cols;
    for (std::uint32_t cp : decode_utf8(form)) {
        auto it = enc.chars.find(cp);
        cols.push_back(it == enc.chars.end() ? 0 : it->second);
    }
    Expr table = g.param(enc.emb_slot);
    std::vector<Expr> seq;
    seq.reserve(cols.size());
    for (int c : cols) seq.push_back(g.gather_cols(table, {c}));
    return bilstm_final_states(g, seq, enc.fwd, enc.bwd);
}

ScalarMix ScalarMix::create(ParamStore& store, const std::string& name, int layers) {
    ScalarMix mix;
    mix.layers = layers;
    mix.s_raw = store.add_zeros(name + ".s_raw", layers, 1);
    mix.gamma = store.add_const(name + ".gamma", 1, 1, 1.0);
    return mix;
}

Expr scalar_mix(Graph& g, const std::vector<Expr>& layers, const ScalarMix& mix) {
    if (layers.empty() || static_cast<int>(layers.size()) != mix.layers)
        throw std::runtime_error("scalar_mix: layer count mismatch");
    Expr weights = g.softmax_col(g.param(mix.s_raw));
    Expr stacked = g.concat_cols(layers);  // D x L
    return g.mul_scalar(g.param(mix.gamma), g.matmul(stacked, weights));
}

std::uint64_t forms_checksum(const Sentence& sentence) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    bool first = true;
    for (const auto& t : sentence.tokens) {
        if (!first) {
            const unsigned char sep = 0x01;
            h = fnv1a64(&sep, 1, h);
        }
        h = fnv1a64(t.form, h);
        first = false;
    }
    return h;
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t x) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 8);
}

void put_f32(std::ofstream& out, float x) {
    std::uint32_t bits;
    std::memcpy(&bits, &x, 4);
    put_u32(out, bits);
}

std::uint32_t get_u32(std::ifstream& in, const char* what) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error(std::string("truncated CTXV file at ") + what);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return x;
}

std::uint64_t get_u64(std::ifstream& in, const char* what) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error(std::string("truncated CTXV file at ") + what);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

}  // namespace

ContextualStore ContextualStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open vector store " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::strncmp(magic, "CTXV", 4) != 0)
        throw std::runtime_error("bad CTXV magic in " + path);
    if (get_u32(in, "version") != 1)
        throw std::runtime_error("unsupported CTXV version in " + path);
    ContextualStore store;
    store.layer_count = get_u32(in, "layer count");
    store.dim = get_u32(in, "dim");
    const std::uint64_t count = get_u64(in, "sentence count");
    for (std::uint64_t s = 0; s < count; ++s) {
        const std::uint32_t key_len = get_u32(in, "key length");
        std::string key(key_len, '\0');
        in.read(key.data(), key_len);
        if (!in) throw std::runtime_error("truncated CTXV key");
        Entry e;
        e.forms_checksum = get_u64(in, "checksum");
        e.n = get_u32(in, "token count");
        const std::size_t values =
            static_cast<std::size_t>(e.n) * store.layer_count * store.dim;
        e.data.resize(values);
        for (std::size_t i = 0; i < values; ++i) {
            std::uint32_t bits = get_u32(in, "tensor data");
            float f;
            std::memcpy(&f, &bits, 4);
            e.data[i] = f;
        }
        store.keys.push_back(key);
        store.entries[key] = std::move(e);
    }
    return store;
}

void ContextualStore::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vector store " + path);
    out.write("CTXV", 4);
    put_u32(out, 1);
    put_u32(out, layer_count);
    put_u32(out, dim);
    put_u64(out, keys.size());
    for (const auto& key : keys) {
        const Entry& e = entries.at(key);
        put_u32(out, static_cast<std::uint32_t>(key.size()));
        out.write(key.data(), static_cast<std::streamsize>(key.size()));
        put_u64(out, e.forms_checksum);
        put_u32(out, e.n);
        for (float f : e.data) put_f32(out, f);
    }
}

const ContextualStore::Entry& ContextualStore::get_verified(
    const std::string& key, const Sentence& sentence) const {
    auto it = entries.find(key);
    if (it == entries.end())
        throw std::runtime_error("sentence key '" + key + "' absent from vector store");
    const Entry& e = it->second;
    if (e.n != sentence.tokens.size())
        throw std::runtime_error("vector store token count mismatch for key '" + key + "'");
    if (e.forms_checksum != forms_checksum(sentence))
        throw std::runtime_error("vector store checksum mismatch for key '" + key +
                                 "': treebank and vectors are misaligned");
    return e;
}

Eigen::VectorXd ContextualStore::layer_vector(const Entry& e, int token, int layer) const {
    Eigen::VectorXd v(dim);
    const std::size_t base =
        (static_cast<std::size_t>(token) * layer_count + layer) * dim;
    for (std::uint32_t i = 0; i < dim; ++i)
        v(i) = static_cast<double>(e.data[base + i]);
    return v;
}

}  // namespace twnp
