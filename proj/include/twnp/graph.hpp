#ifndef TWNP_GRAPH_HPP
#define TWNP_GRAPH_HPP

#include <functional>
#include <string>
#include <vector>

#include "twnp/params.hpp"

namespace twnp {

using Expr = int;

// Reverse-mode tape over dense double matrices. Values are computed eagerly
// at node creation; backward() walks the tape in reverse and accumulates
// parameter gradients into the ParamStore.
class Graph {
  public:
    explicit Graph(ParamStore& store, bool training = false, Rng* rng = nullptr)
        : store_(&store), training_(training), rng_(rng) {}

    Expr param(int slot);
    Expr param(const std::string& name) { return param(store_->slot_of(name)); }
    Expr input(Mat value);
    Expr zeros(int rows, int cols) { return input(Mat::Zero(rows, cols)); }

    Expr matmul(Expr a, Expr b);
    Expr add(Expr a, Expr b);                 // same shape
    Expr add_many(const std::vector<Expr>& xs);
    // matrix + column vector broadcast over columns (also plain add for vectors)
    Expr add_bcol(Expr a, Expr bias);
    Expr cmult(Expr a, Expr b);
    Expr scale(Expr a, double alpha);
    Expr mul_scalar(Expr scalar1x1, Expr a);
    Expr tanh(Expr a);
    Expr logistic(Expr a);
    Expr concat_rows(const std::vector<Expr>& xs);
    Expr concat_cols(const std::vector<Expr>& xs);
    Expr gather_cols(Expr a, std::vector<int> idx);
    Expr slice_rows(Expr a, int row0, int nrows);
    Expr sum_all(Expr a);
    Expr pick(Expr a, int row, int col = 0);
    Expr softmax_col(Expr a);                 // column vector
    Expr pick_neg_log_softmax(Expr a, int row);  // cross-entropy vs one index
    // Inverted dropout; identity unless the graph is in training mode.
    Expr dropout(Expr a, double rate);

    Expr affine(Expr w, Expr x, Expr bias) { return add_bcol(matmul(w, x), bias); }

    const Mat& value(Expr e) const { return nodes_[e].value; }
    double scalar(Expr e) const;

    // Seeds d(loss)/d(loss)=1 and accumulates parameter gradients.
    void backward(Expr loss);

    bool training() const { return training_; }
    Rng& rng();

  private:
    enum class Op {
        Param, Input, MatMul, Add, AddN, AddBCol, CMult, Scale, MulScalar,
        Tanh, Logistic, ConcatRows, ConcatCols, GatherCols, SliceRows,
        SumAll, Pick, SoftmaxCol, PickNLS, Dropout
    };
    struct Node {
        Op op;
        int a = -1, b = -1;
        std::vector<int> list;   // n-ary inputs or index payload
        int slot = -1;
        double alpha = 0.0;
        Mat value;
        Mat aux;                 // cached mask / softmax
    };

    Expr push(Node n);
    const Mat& val(Expr e) const { return nodes_[e].value; }

    ParamStore* store_;
    bool training_;
    Rng* rng_;
    std::vector<Node> nodes_;
};

// Plain softmax on a column vector, shared by graph and non-graph callers.
Eigen::VectorXd softmax(const Eigen::VectorXd& x);

struct GradCheckReport {
    double max_rel_err = 0.0;
    bool pass = false;
    std::string worst_param;
};

// Compares analytic gradients against central finite differences. fn must
// build a fresh graph over the store's parameters, run backward into the
// store's grad buffers, and return the scalar loss; it is called repeatedly
// with perturbed parameters. Error per tensor is the max component gap over
// max(|analytic|_inf, |numeric|_inf, 1).
GradCheckReport grad_check(const std::function<double()>& fn, ParamStore& store,
                           double tol, double epsilon = 1e-5);

}  // namespace twnp

#endif
