#ifndef TWNP_NN_HPP
#define TWNP_NN_HPP

#include <string>
#include <utility>
#include <vector>

#include "twnp/graph.hpp"

namespace twnp {

// Gated cell parameters. Each weight matrix is d_h x (d_in + d_h) and acts on
// the concatenation [x; h_prev].
struct LstmParams {
    int w_i = -1, w_f = -1, w_o = -1, w_g = -1;
    int b_i = -1, b_f = -1, b_o = -1, b_g = -1;
    int d_in = 0, d_h = 0;

    static LstmParams create(ParamStore& store, const std::string& prefix,
                             int d_in, int d_h);
};

// i,f,o = logistic gates, g = tanh candidate; c = f*c_prev + i*g; h = o*tanh(c).
std::pair<Expr, Expr> lstm_step(Graph& g, Expr x, Expr h_prev, Expr c_prev,
                                const LstmParams& p);

struct BiLstmParams {
    std::vector<LstmParams> fwd, bwd;  // one per layer
    int layers = 0, d_in = 0, d_h = 0;
    double dropout = 0.0;

    static BiLstmParams create(ParamStore& store, const std::string& prefix,
                               int layers, int d_in, int d_h, double dropout);
};

// Per position, concatenation of the final layer's forward and backward
// states (dim 2*d_h). Stacked layers feed concatenated outputs upward;
// dropout hits each layer's outputs in training mode only.
std::vector<Expr> bilstm(Graph& g, const std::vector<Expr>& seq,
                         const BiLstmParams& p);

// Concatenated final forward and backward hidden states of a single-layer
// BiLSTM run (the char-embedding read-out).
Expr bilstm_final_states(Graph& g, const std::vector<Expr>& seq,
                         const LstmParams& fwd, const LstmParams& bwd);

struct MlpParams {
    int w1 = -1, b1 = -1, w2 = -1, b2 = -1;
    int d_in = 0, d_hidden = 0, d_out = 0;

    static MlpParams create(ParamStore& store, const std::string& prefix,
                            int d_in, int d_hidden, int d_out);
};

// One tanh hidden layer, linear output. Accepts a matrix of column inputs.
Expr mlp(Graph& g, Expr x, const MlpParams& p);

}  // namespace twnp

#endif
