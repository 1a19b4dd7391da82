#include "twnp/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace twnp {

namespace {
[[noreturn]] void dim_error(const char* op, long ar, long ac, long br, long bc) {
    throw std::runtime_error(std::string("dimension mismatch in ") + op + ": " +
                             std::to_string(ar) + "x" + std::to_string(ac) + " vs " +
                             std::to_string(br) + "x" + std::to_string(bc));
}
}  // namespace

Expr Graph::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<Expr>(nodes_.size()) - 1;
}

Rng& Graph::rng() {
    if (!rng_) throw std::runtime_error("graph has no RNG attached");
    return *rng_;
}

Expr Graph::param(int slot) {
    Node n;
    n.op = Op::Param;
    n.slot = slot;
    n.value = store_->value(slot);
    return push(std::move(n));
}

Expr Graph::input(Mat value) {
    Node n;
    n.op = Op::Input;
    n.value = std::move(value);
    return push(std::move(n));
}

Expr Graph::matmul(Expr a, Expr b) {
    if (val(a).cols() != val(b).rows())
        dim_error("matmul", val(a).rows(), val(a).cols(), val(b).rows(), val(b).cols());
    Node n;
    n.op = Op::MatMul;
    n.a = a;
    n.b = b;
    n.value = val(a) * val(b);
    return push(std::move(n));
}

Expr Graph::add(Expr a, Expr b) {
    if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols())
        dim_error("add", val(a).rows(), val(a).cols(), val(b).rows(), val(b).cols());
    Node n;
    n.op = Op::Add;
    n.a = a;
    n.b = b;
    n.value = val(a) + val(b);
    return push(std::move(n));
}

Expr Graph::add_many(const std::vector<Expr>& xs) {
    if (xs.empty()) throw std::runtime_error("add_many on empty list");
    Node n;
    n.op = Op::AddN;
    n.list = xs;
    n.value = val(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (val(xs[i]).rows() != n.value.rows() || val(xs[i]).cols() != n.value.cols())
            dim_error("add_many", n.value.rows(), n.value.cols(),
                      val(xs[i]).rows(), val(xs[i]).cols());
        n.value += val(xs[i]);
    }
    return push(std::move(n));
}

Expr Graph::add_bcol(Expr a, Expr bias) {
    if (val(bias).cols() != 1 || val(bias).rows() != val(a).rows())
        dim_error("add_bcol", val(a).rows(), val(a).cols(), val(bias).rows(), val(bias).cols());
    Node n;
    n.op = Op::AddBCol;
    n.a = a;
    n.b = bias;
    n.value = val(a).colwise() + Eigen::VectorXd(val(bias).col(0));
    return push(std::move(n));
}

Expr Graph::cmult(Expr a, Expr b) {
    if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols())
        dim_error("cmult", val(a).rows(), val(a).cols(), val(b).rows(), val(b).cols());
    Node n;
    n.op = Op::CMult;
    n.a = a;
    n.b = b;
    n.value = val(a).cwiseProduct(val(b));
    return push(std::move(n));
}

Expr Graph::scale(Expr a, double alpha) {
    Node n;
    n.op = Op::Scale;
    n.a = a;
    n.alpha = alpha;
    n.value = alpha * val(a);
    return push(std::move(n));
}

Expr Graph::mul_scalar(Expr scalar1x1, Expr a) {
    if (val(scalar1x1).rows() != 1 || val(scalar1x1).cols() != 1)
        throw std::runtime_error("mul_scalar: scalar operand is not 1x1");
    Node n;
    n.op = Op::MulScalar;
    n.a = scalar1x1;
    n.b = a;
    n.value = val(scalar1x1)(0, 0) * val(a);
    return push(std::move(n));
}

Expr Graph::tanh(Expr a) {
    Node n;
    n.op = Op::Tanh;
    n.a = a;
    n.value = val(a).array().tanh();
    return push(std::move(n));
}

Expr Graph::logistic(Expr a) {
    Node n;
    n.op = Op::Logistic;
    n.a = a;
    n.value = (1.0 / (1.0 + (-val(a).array()).exp()));
    return push(std::move(n));
}

Expr Graph::concat_rows(const std::vector<Expr>& xs) {
    if (xs.empty()) throw std::runtime_error("concat_rows on empty list");
    long rows = 0;
    const long cols = val(xs[0]).cols();
    for (Expr x : xs) {
        if (val(x).cols() != cols)
            dim_error("concat_rows", val(xs[0]).rows(), cols, val(x).rows(), val(x).cols());
        rows += val(x).rows();
    }
    Node n;
    n.op = Op::ConcatRows;
    n.list = xs;
    n.value.resize(rows, cols);
    long r = 0;
    for (Expr x : xs) {
        n.value.middleRows(r, val(x).rows()) = val(x);
        r += val(x).rows();
    }
    return push(std::move(n));
}

Expr Graph::concat_cols(const std::vector<Expr>& xs) {
    if (xs.empty()) throw std::runtime_error("concat_cols on empty list");
    long cols = 0;
    const long rows = val(xs[0]).rows();
    for (Expr x : xs) {
        if (val(x).rows() != rows)
            dim_error("concat_cols", rows, val(xs[0]).cols(), val(x).rows(), val(x).cols());
        cols += val(x).cols();
    }
    Node n;
    n.op = Op::ConcatCols;
    n.list = xs;
    n.value.resize(rows, cols);
    long c = 0;
    for (Expr x : xs) {
        n.value.middleCols(c, val(x).cols()) = val(x);
        c += val(x).cols();
    }
    return push(std::move(n));
}

Expr Graph::gather_cols(Expr a, std::vector<int> idx) {
    Node n;
    n.op = Op::GatherCols;
    n.a = a;
    n.value.resize(val(a).rows(), static_cast<long>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= val(a).cols())
            throw std::runtime_error("gather_cols: index out of range");
        n.value.col(static_cast<long>(j)) = val(a).col(idx[j]);
    }
    n.list = std::move(idx);
    return push(std::move(n));
}

Expr Graph::slice_rows(Expr a, int row0, int nrows) {
    if (row0 < 0 || row0 + nrows > val(a).rows())
        throw std::runtime_error("slice_rows out of range");
    Node n;
    n.op = Op::SliceRows;
    n.a = a;
    n.list = {row0, nrows};
    n.value = val(a).middleRows(row0, nrows);
    return push(std::move(n));
}

Expr Graph::sum_all(Expr a) {
    Node n;
    n.op = Op::SumAll;
    n.a = a;
    n.value = Mat::Constant(1, 1, val(a).sum());
    return push(std::move(n));
}

Expr Graph::pick(Expr a, int row, int col) {
    if (row < 0 || row >= val(a).rows() || col < 0 || col >= val(a).cols())
        throw std::runtime_error("pick out of range");
    Node n;
    n.op = Op::Pick;
    n.a = a;
    n.list = {row, col};
    n.value = Mat::Constant(1, 1, val(a)(row, col));
    return push(std::move(n));
}

Expr Graph::softmax_col(Expr a) {
    if (val(a).cols() != 1) throw std::runtime_error("softmax_col needs a column vector");
    Node n;
    n.op = Op::SoftmaxCol;
    n.a = a;
    n.value = softmax(val(a).col(0));
    return push(std::move(n));
}

Expr Graph::pick_neg_log_softmax(Expr a, int row) {
    if (val(a).cols() != 1) throw std::runtime_error("pick_neg_log_softmax needs a column vector");
    if (row < 0 || row >= val(a).rows()) throw std::runtime_error("label index out of range");
    Node n;
    n.op = Op::PickNLS;
    n.a = a;
    n.list = {row};
    n.aux = softmax(val(a).col(0));
    n.value = Mat::Constant(1, 1, -std::log(std::max(n.aux(row, 0), 1e-300)));
    return push(std::move(n));
}

Expr Graph::dropout(Expr a, double rate) {
    if (!training_ || rate <= 0.0) return a;
    Node n;
    n.op = Op::Dropout;
    n.a = a;
    n.alpha = rate;
    n.aux.resize(val(a).rows(), val(a).cols());
    const double keep = 1.0 - rate;
    for (long r = 0; r < n.aux.rows(); ++r)
        for (long c = 0; c < n.aux.cols(); ++c)
            n.aux(r, c) = rng().uniform() < rate ? 0.0 : 1.0 / keep;
    n.value = val(a).cwiseProduct(n.aux);
    return push(std::move(n));
}

double Graph::scalar(Expr e) const {
    if (val(e).rows() != 1 || val(e).cols() != 1)
        throw std::runtime_error("scalar() on non-1x1 node");
    return val(e)(0, 0);
}

void Graph::backward(Expr loss) {
    if (val(loss).rows() != 1 || val(loss).cols() != 1)
        throw std::runtime_error("backward needs a scalar loss");
    std::vector<Mat> grads(nodes_.size());
    std::vector<bool> live(nodes_.size(), false);
    auto touch = [&](int e) {
        if (!live[e]) {
            grads[e] = Mat::Zero(nodes_[e].value.rows(), nodes_[e].value.cols());
            live[e] = true;
        }
    };
    touch(loss);
    grads[loss](0, 0) = 1.0;
    for (int i = loss; i >= 0; --i) {
        if (!live[i]) continue;
        const Node& n = nodes_[i];
        const Mat& g = grads[i];
        switch (n.op) {
            case Op::Param:
                store_->grad(n.slot) += g;
                break;
            case Op::Input:
                break;
            case Op::MatMul:
                touch(n.a);
                touch(n.b);
                grads[n.a] += g * nodes_[n.b].value.transpose();
                grads[n.b] += nodes_[n.a].value.transpose() * g;
                break;
            case Op::Add:
                touch(n.a);
                touch(n.b);
                grads[n.a] += g;
                grads[n.b] += g;
                break;
            case Op::AddN:
                for (int x : n.list) {
                    touch(x);
                    grads[x] += g;
                }
                break;
            case Op::AddBCol:
                touch(n.a);
                touch(n.b);
                grads[n.a] += g;
                grads[n.b].col(0) += g.rowwise().sum();
                break;
            case Op::CMult:
                touch(n.a);
                touch(n.b);
                grads[n.a] += g.cwiseProduct(nodes_[n.b].value);
                grads[n.b] += g.cwiseProduct(nodes_[n.a].value);
                break;
            case Op::Scale:
                touch(n.a);
                grads[n.a] += n.alpha * g;
                break;
            case Op::MulScalar:
                touch(n.a);
                touch(n.b);
                grads[n.a](0, 0) += g.cwiseProduct(nodes_[n.b].value).sum();
                grads[n.b] += nodes_[n.a].value(0, 0) * g;
                break;
            case Op::Tanh:
                touch(n.a);
                grads[n.a].array() += g.array() * (1.0 - n.value.array().square());
                break;
            case Op::Logistic:
                touch(n.a);
                grads[n.a].array() += g.array() * n.value.array() * (1.0 - n.value.array());
                break;
            case Op::ConcatRows: {
                long r = 0;
                for (int x : n.list) {
                    touch(x);
                    grads[x] += g.middleRows(r, nodes_[x].value.rows());
                    r += nodes_[x].value.rows();
                }
                break;
            }
            case Op::ConcatCols: {
                long c = 0;
                for (int x : n.list) {
                    touch(x);
                    grads[x] += g.middleCols(c, nodes_[x].value.cols());
                    c += nodes_[x].value.cols();
                }
                break;
            }
            case Op::GatherCols:
                touch(n.a);
                for (std::size_t j = 0; j < n.list.size(); ++j)
                    grads[n.a].col(n.list[j]) += g.col(static_cast<long>(j));
                break;
            case Op::SliceRows:
                touch(n.a);
                grads[n.a].middleRows(n.list[0], n.list[1]) += g;
                break;
            case Op::SumAll:
                touch(n.a);
                grads[n.a].array() += g(0, 0);
                break;
            case Op::Pick:
                touch(n.a);
                grads[n.a](n.list[0], n.list[1]) += g(0, 0);
                break;
            case Op::SoftmaxCol: {
                touch(n.a);
                const double dot = g.col(0).dot(n.value.col(0));
                grads[n.a].col(0) +=
                    n.value.col(0).cwiseProduct(g.col(0) - Eigen::VectorXd::Constant(g.rows(), dot));
                break;
            }
            case Op::PickNLS: {
                touch(n.a);
                Eigen::VectorXd d = n.aux.col(0);
                d(n.list[0]) -= 1.0;
                grads[n.a].col(0) += g(0, 0) * d;
                break;
            }
            case Op::Dropout:
                touch(n.a);
                grads[n.a] += g.cwiseProduct(n.aux);
                break;
        }
    }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& x) {
    const double m = x.maxCoeff();
    Eigen::VectorXd e = (x.array() - m).exp();
    return e / e.sum();
}

GradCheckReport grad_check(const std::function<double()>& fn, ParamStore& store,
                           double tol, double epsilon) {
    store.zero_grads();
    const double base = fn();
    if (!std::isfinite(base)) throw std::runtime_error("grad_check: non-finite loss");
    std::vector<Mat> analytic;
    analytic.reserve(store.count());
    for (int s = 0; s < store.count(); ++s) analytic.push_back(store.grad(s));

    GradCheckReport report;
    for (int s = 0; s < store.count(); ++s) {
        Mat& value = store.value(s);
        Mat numeric = Mat::Zero(value.rows(), value.cols());
        for (long r = 0; r < value.rows(); ++r) {
            for (long c = 0; c < value.cols(); ++c) {
                const double saved = value(r, c);
                value(r, c) = saved + epsilon;
                store.zero_grads();
                const double fp = fn();
                value(r, c) = saved - epsilon;
                store.zero_grads();
                const double fm = fn();
                value(r, c) = saved;
                if (!std::isfinite(fp) || !std::isfinite(fm))
                    throw std::runtime_error("grad_check: non-finite loss");
                numeric(r, c) = (fp - fm) / (2.0 * epsilon);
            }
        }
        const double scale = std::max({analytic[s].cwiseAbs().maxCoeff(),
                                       numeric.cwiseAbs().maxCoeff(), 1.0});
        const double err = (analytic[s] - numeric).cwiseAbs().maxCoeff() / scale;
        if (err > report.max_rel_err) {
            report.max_rel_err = err;
            report.worst_param = store.name(s);
        }
    }
    report.pass = report.max_rel_err < tol;
    return report;
}

}  // namespace twnp
