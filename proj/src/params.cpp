#include "twnp/params.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace twnp {

int ParamStore::add_slot(const std::string& name, Mat value) {
    if (index_.count(name))
        throw std::runtime_error("duplicate parameter name: " + name);
    Slot s;
    s.name = name;
    s.grad = Mat::Zero(value.rows(), value.cols());
    s.m = Mat::Zero(value.rows(), value.cols());
    s.v = Mat::Zero(value.rows(), value.cols());
    s.value = std::move(value);
    slots_.push_back(std::move(s));
    index_[name] = static_cast<int>(slots_.size()) - 1;
    return static_cast<int>(slots_.size()) - 1;
}

int ParamStore::add(const std::string& name, int rows, int cols) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    Mat value(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            value(r, c) = rng_.uniform(-bound, bound);
    return add_slot(name, std::move(value));
}

int ParamStore::add_zeros(const std::string& name, int rows, int cols) {
    return add_slot(name, Mat::Zero(rows, cols));
}

int ParamStore::add_const(const std::string& name, int rows, int cols, double fill) {
    return add_slot(name, Mat::Constant(rows, cols, fill));
}

int ParamStore::slot_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw std::runtime_error("unknown parameter: " + name);
    return it->second;
}

void ParamStore::zero_grads() {
    for (auto& s : slots_) s.grad.setZero();
}

void ParamStore::adam_step(const AdamConfig& cfg) {
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
    for (auto& s : slots_) {
        s.m = cfg.beta1 * s.m + (1.0 - cfg.beta1) * s.grad;
        s.v = cfg.beta2 * s.v.array().matrix() +
              (1.0 - cfg.beta2) * s.grad.array().square().matrix();
        s.value.array() -= cfg.lr * (s.m.array() / bc1) /
                           ((s.v.array() / bc2).sqrt() + cfg.eps);
    }
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t x) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("truncated checkpoint");
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return x;
}

void put_f64(std::ofstream& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 8);
}

double get_f64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("truncated checkpoint");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

}  // namespace

void ParamStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out.write("TWNP", 4);
    put_u32(out, 1);
    for (const auto& s : slots_) {
        put_u32(out, static_cast<std::uint32_t>(s.name.size()));
        out.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
        put_u32(out, 2);
        put_u32(out, static_cast<std::uint32_t>(s.value.rows()));
        put_u32(out, static_cast<std::uint32_t>(s.value.cols()));
        for (int r = 0; r < s.value.rows(); ++r)
            for (int c = 0; c < s.value.cols(); ++c)
                put_f64(out, s.value(r, c));
    }
}

void ParamStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::strncmp(magic, "TWNP", 4) != 0)
        throw std::runtime_error("bad checkpoint magic in " + path);
    if (get_u32(in) != 1) throw std::runtime_error("unsupported checkpoint version");
    while (in.peek() != EOF) {
        std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in) throw std::runtime_error("truncated checkpoint");
        std::uint32_t rank = get_u32(in);
        if (rank != 2) throw std::runtime_error("unexpected tensor rank");
        std::uint32_t rows = get_u32(in);
        std::uint32_t cols = get_u32(in);
        Mat& value = slots_[slot_of(name)].value;
        if (value.rows() != static_cast<int>(rows) || value.cols() != static_cast<int>(cols))
            throw std::runtime_error("shape mismatch for tensor " + name);
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c)
                value(r, c) = get_f64(in);
    }
}

}  // namespace twnp
