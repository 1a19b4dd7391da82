#include "twnp/nn.hpp"

namespace twnp {

LstmParams LstmParams::create(ParamStore& store, const std::string& prefix,
                              int d_in, int d_h) {
    LstmParams p;
    p.d_in = d_in;
    p.d_h = d_h;
    p.w_i = store.add(prefix + ".w_i", d_h, d_in + d_h);
    p.w_f = store.add(prefix + ".w_f", d_h, d_in + d_h);
    p.w_o = store.add(prefix + ".w_o", d_h, d_in + d_h);
    p.w_g = store.add(prefix + ".w_g", d_h, d_in + d_h);
    p.b_i = store.add_zeros(prefix + ".b_i", d_h, 1);
    p.b_f = store.add_zeros(prefix + ".b_f", d_h, 1);
    p.b_o = store.add_zeros(prefix + ".b_o", d_h, 1);
    p.b_g = store.add_zeros(prefix + ".b_g", d_h, 1);
    return p;
}

std::pair<Expr, Expr> lstm_step(Graph& g, Expr x, Expr h_prev, Expr c_prev,
                                const LstmParams& p) {
    Expr xh = g.concat_rows({x, h_prev});
    Expr i = g.logistic(g.affine(g.param(p.w_i), xh, g.param(p.b_i)));
    Expr f = g.logistic(g.affine(g.param(p.w_f), xh, g.param(p.b_f)));
    Expr o = g.logistic(g.affine(g.param(p.w_o), xh, g.param(p.b_o)));
    Expr cand = g.tanh(g.affine(g.param(p.w_g), xh, g.param(p.b_g)));
    Expr c = g.add(g.cmult(f, c_prev), g.cmult(i, cand));
    Expr h = g.cmult(o, g.tanh(c));
    return {h, c};
}

BiLstmParams BiLstmParams::create(ParamStore& store, const std::string& prefix,
                                  int layers, int d_in, int d_h, double dropout) {
    BiLstmParams p;
    p.layers = layers;
    p.d_in = d_in;
    p.d_h = d_h;
    p.dropout = dropout;
    for (int l = 0; l < layers; ++l) {
        const int in = l == 0 ? d_in : 2 * d_h;
        p.fwd.push_back(LstmParams::create(store, prefix + ".l" + std::to_string(l) + ".fwd", in, d_h));
        p.bwd.push_back(LstmParams::create(store, prefix + ".l" + std::to_string(l) + ".bwd", in, d_h));
    }
    return p;
}

namespace {

std::vector<Expr> run_direction(Graph& g, const std::vector<Expr>& seq,
                                const LstmParams& p, bool reversed) {
    const int n = static_cast<int>(seq.size());
    std::vector<Expr> out(n);
    Expr h = g.zeros(p.d_h, 1);
    Expr c = g.zeros(p.d_h, 1);
    for (int t = 0; t < n; ++t) {
        const int pos = reversed ? n - 1 - t : t;
        std::tie(h, c) = lstm_step(g, seq[pos], h, c, p);
        out[pos] = h;
    }
    return out;
}

}  // namespace

std::vector<Expr> bilstm(Graph& g, const std::vector<Expr>& seq,
                         const BiLstmParams& p) {
    if (seq.empty()) throw std::runtime_error("bilstm on empty sequence");
    std::vector<Expr> layer_in = seq;
    for (int l = 0; l < p.layers; ++l) {
        auto fwd = run_direction(g, layer_in, p.fwd[l], false);
        auto bwd = run_direction(g, layer_in, p.bwd[l], true);
        std::vector<Expr> out(seq.size());
        for (std::size_t t = 0; t < seq.size(); ++t)
            out[t] = g.dropout(g.concat_rows({fwd[t], bwd[t]}), p.dropout);
        layer_in = std::move(out);
    }
    return layer_in;
}

Expr bilstm_final_states(Graph& g, const std::vector<Expr>& seq,
                         const LstmParams& fwd, const LstmParams& bwd) {
    if (seq.empty()) throw std::runtime_error("bilstm_final_states on empty sequence");
    auto f = run_direction(g, seq, fwd, false);
    auto b = run_direction(g, seq, bwd, true);
    return g.concat_rows({f.back(), b.front()});
}

MlpParams MlpParams::create(ParamStore& store, const std::string& prefix,
                            int d_in, int d_hidden, int d_out) {
    MlpParams p;
    p.d_in = d_in;
    p.d_hidden = d_hidden;
    p.d_out = d_out;
    p.w1 = store.add(prefix + ".w1", d_hidden, d_in);
    p.b1 = store.add_zeros(prefix + ".b1", d_hidden, 1);
    p.w2 = store.add(prefix + ".w2", d_out, d_hidden);
    p.b2 = store.add_zeros(prefix + ".b2", d_out, 1);
    return p;
}

Expr mlp(Graph& g, Expr x, const MlpParams& p) {
    Expr hidden = g.tanh(g.affine(g.param(p.w1), x, g.param(p.b1)));
    return g.affine(g.param(p.w2), hidden, g.param(p.b2));
}

}  // namespace twnp
