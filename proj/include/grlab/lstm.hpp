#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grlab/codec.hpp"

namespace grlab {

constexpr int kGoalBits = 36;

// Embedding -> single LSTM layer -> 36-unit sigmoid head. Gate weights act
// on the concatenation [h_{t-1}; x_t].
struct LstmParams {
  int vocab_size = 0;  // embedding table has vocab_size+1 rows, row 0 = OOV
  int embed_dim = 64;
  int hidden_dim = 128;

  Eigen::MatrixXd embed;                  // (V+1) x E
  Eigen::MatrixXd Wf, Wi, Wo, Wc;         // H x (H+E)
  Eigen::VectorXd bf, bi, bo, bc;         // H
  Eigen::MatrixXd Wy;                     // 36 x H
  Eigen::VectorXd by;                     // 36

  // Uniform +-1/sqrt(fan-in) weights; forget bias starts at +1.
  static LstmParams init(int vocab_size, int embed_dim, int hidden_dim,
                         unsigned seed);
};

struct ForwardCache {
  std::vector<int> ids;
  std::vector<Eigen::VectorXd> x, f, i, o, cbar, c, h;
  Eigen::VectorXd probs;  // 36, strictly inside (0,1)
};

ForwardCache forward(const LstmParams& p, const std::vector<int>& seq);

double bce_loss(const Eigen::VectorXd& probs, const Eigen::VectorXd& target);

// Gradient tensors, same shapes as the parameters.
struct LstmGrads {
  Eigen::MatrixXd embed;
  Eigen::MatrixXd Wf, Wi, Wo, Wc;
  Eigen::VectorXd bf, bi, bo, bc;
  Eigen::MatrixXd Wy;
  Eigen::VectorXd by;

  static LstmGrads zeros(const LstmParams& p);
  void add(const LstmGrads& other);
  void scale(double s);
  double global_norm() const;
  void clip_global_norm(double max_norm);
};

// Exact gradients of bce_loss(forward(seq), target) for every parameter;
// only embedding rows visited by the sequence receive gradient.
LstmGrads backward(const LstmParams& p, const ForwardCache& cache,
                   const Eigen::VectorXd& target);

struct TrainConfig {
  double learning_rate = 1e-3;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;
  int max_epochs = 10'000;
  int patience = 50;
  double validation_fraction = 0.1;
  int batch_size = 32;
  double grad_clip_norm = 5.0;
  unsigned seed = 1;
};

struct RmspropState {
  LstmGrads sq;  // running mean of squared gradients
  static RmspropState init(const LstmParams& p);
};

// s <- rho*s + (1-rho)*g^2; theta <- theta - lr*g/(sqrt(s)+eps).
// Throws on non-finite gradients.
void rmsprop_step(LstmParams& p, const LstmGrads& g, RmspropState& state,
                  const TrainConfig& cfg);

struct Sample {
  std::vector<int> ids;
  Eigen::VectorXd target;  // 36 bits as 0/1
};

struct TrainReport {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;    // index 0 = before training
  int best_epoch = 0;              // 1-based; 0 means the initial weights won
  int stopped_epoch = 0;
  double seconds = 0.0;
  std::uint64_t checksum = 0;
};

// Early-stops on validation loss; leaves the best-validation parameters in
// `p`. Deterministic given cfg.seed.
TrainReport train(LstmParams& p, const std::vector<Sample>& train_samples,
                  const std::vector<Sample>& val_samples,
                  const TrainConfig& cfg);

// Convenience: carves cfg.validation_fraction off `samples` first.
TrainReport train(LstmParams& p, const std::vector<Sample>& samples,
                  const TrainConfig& cfg);

std::uint64_t params_checksum(const LstmParams& p);

// Central-difference audit of backward() over a random (model, sequence,
// target) triple; returns the max relative error across all parameters.
double finite_difference_max_error(int vocab_size, int embed_dim,
                                   int hidden_dim, int seq_len, unsigned seed);

// Versioned binary checkpoint with the vocabulary and a free-form JSON
// metadata blob (see README for the byte layout).
void save_checkpoint(const std::string& path, const LstmParams& p,
                     const Vocabulary& vocab, const std::string& meta_json);
struct Checkpoint {
  LstmParams params;
  Vocabulary vocab;
  std::string meta_json;
};
Checkpoint load_checkpoint(const std::string& path);

struct Prediction {
  int candidate_index = -1;
  NearestResult nearest;
  std::array<double, 36> probs{};
};

// Maps state codes through the vocabulary (OOV -> 0), runs the network and
// snaps the output onto the closest candidate code. Always one goal.
Prediction predict_goal(const LstmParams& p, const Vocabulary& vocab,
                        const std::vector<StateCode>& state_codes,
                        const std::vector<StateCode>& candidates);

Eigen::VectorXd target_from_code(StateCode code);

}  // namespace grlab
