#ifndef TWNP_PARAMS_HPP
#define TWNP_PARAMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "twnp/rng.hpp"

namespace twnp {

using Mat = Eigen::MatrixXd;

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Named parameter tensors with their gradients and Adam moments. Insertion
// order is the serialization order, so identical construction sequences give
// byte-identical checkpoints.
class ParamStore {
  public:
    struct Slot {
        std::string name;
        Mat value, grad, m, v;
    };

    explicit ParamStore(std::uint64_t seed = 0) : seed_(seed), rng_(seed) {}

    // Glorot-uniform init: +-sqrt(6/(rows+cols)). Biases should use add_zeros.
    int add(const std::string& name, int rows, int cols);
    int add_zeros(const std::string& name, int rows, int cols);
    int add_const(const std::string& name, int rows, int cols, double fill);

    bool has(const std::string& name) const { return index_.count(name) > 0; }
    int slot_of(const std::string& name) const;
    Mat& value(int slot) { return slots_[slot].value; }
    const Mat& value(int slot) const { return slots_[slot].value; }
    Mat& grad(int slot) { return slots_[slot].grad; }
    const std::string& name(int slot) const { return slots_[slot].name; }
    int count() const { return static_cast<int>(slots_.size()); }
    std::uint64_t step() const { return step_; }
    std::uint64_t seed() const { return seed_; }
    Rng& rng() { return rng_; }

    void zero_grads();
    void adam_step(const AdamConfig& cfg);

    // Checkpoint layout: "TWNP", u32 version, then per tensor: u32 name length,
    // name bytes, u32 rank (=2), u32 dims (rows, cols), row-major float64
    // little-endian data. Records run to end of file.
    void save(const std::string& path) const;
    // Loads values into existing slots by name; shapes must match.
    void load(const std::string& path);

  private:
    int add_slot(const std::string& name, Mat value);

    std::vector<Slot> slots_;
    std::unordered_map<std::string, int> index_;
    std::uint64_t step_ = 0;
    std::uint64_t seed_ = 0;
    Rng rng_;
};

}  // namespace twnp

#endif
