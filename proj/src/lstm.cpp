#include "grlab/lstm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace grlab {
namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

Eigen::MatrixXd uniform_matrix(int rows, int cols, double bound,
                               std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

}  // namespace

LstmParams LstmParams::init(int vocab_size, int embed_dim, int hidden_dim,
                            unsigned seed) {
  LstmParams p;
  p.vocab_size = vocab_size;
  p.embed_dim = embed_dim;
  p.hidden_dim = hidden_dim;
  std::mt19937 rng(seed);
  const int z = hidden_dim + embed_dim;
  const double gate_bound = 1.0 / std::sqrt(static_cast<double>(z));
  p.embed = uniform_matrix(vocab_size + 1, embed_dim,
                           1.0 / std::sqrt(static_cast<double>(embed_dim)),
                           rng);
  p.Wf = uniform_matrix(hidden_dim, z, gate_bound, rng);
  p.Wi = uniform_matrix(hidden_dim, z, gate_bound, rng);
  p.Wo = uniform_matrix(hidden_dim, z, gate_bound, rng);
  p.Wc = uniform_matrix(hidden_dim, z, gate_bound, rng);
  p.bf = Eigen::VectorXd::Ones(hidden_dim);  // open forget gate at start
  p.bi = Eigen::VectorXd::Zero(hidden_dim);
  p.bo = Eigen::VectorXd::Zero(hidden_dim);
  p.bc = Eigen::VectorXd::Zero(hidden_dim);
  p.Wy = uniform_matrix(kGoalBits, hidden_dim,
                        1.0 / std::sqrt(static_cast<double>(hidden_dim)), rng);
  p.by = Eigen::VectorXd::Zero(kGoalBits);
  return p;
}

ForwardCache forward(const LstmParams& p, const std::vector<int>& seq) {
  if (seq.empty()) throw Error("forward: empty sequence");
  const int H = p.hidden_dim;
  const int E = p.embed_dim;
  ForwardCache cache;
  cache.ids = seq;

  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd z(H + E);

  for (int id : seq) {
    if (id < 0 || id > p.vocab_size) {
      throw Error("forward: token id " + std::to_string(id) +
                  " outside the vocabulary");
    }
    Eigen::VectorXd x = p.embed.row(id).transpose();
    z.head(H) = h;
    z.tail(E) = x;

    Eigen::VectorXd f = (p.Wf * z + p.bf).unaryExpr([](double v) {
      return sigmoid(v);
    });
    Eigen::VectorXd i = (p.Wi * z + p.bi).unaryExpr([](double v) {
      return sigmoid(v);
    });
    Eigen::VectorXd o = (p.Wo * z + p.bo).unaryExpr([](double v) {
      return sigmoid(v);
    });
    Eigen::VectorXd cbar = (p.Wc * z + p.bc).array().tanh();

    c = f.cwiseProduct(c) + i.cwiseProduct(cbar);
    h = o.cwiseProduct(c.array().tanh().matrix());

    cache.x.push_back(std::move(x));
    cache.f.push_back(std::move(f));
    cache.i.push_back(std::move(i));
    cache.o.push_back(std::move(o));
    cache.cbar.push_back(std::move(cbar));
    cache.c.push_back(c);
    cache.h.push_back(h);
  }

  cache.probs = (p.Wy * h + p.by).unaryExpr([](double v) {
    double s = sigmoid(v);
    return std::clamp(s, kProbClamp, 1.0 - kProbClamp);
  });
  return cache;
}

double bce_loss(const Eigen::VectorXd& probs, const Eigen::VectorXd& target) {
  double loss = 0.0;
  for (int b = 0; b < probs.size(); ++b) {
    double pb = std::clamp(probs[b], kProbClamp, 1.0 - kProbClamp);
    loss -= target[b] * std::log(pb) + (1.0 - target[b]) * std::log(1.0 - pb);
  }
  return loss;
}

LstmGrads LstmGrads::zeros(const LstmParams& p) {
  LstmGrads g;
  g.embed = Eigen::MatrixXd::Zero(p.embed.rows(), p.embed.cols());
  g.Wf = Eigen::MatrixXd::Zero(p.Wf.rows(), p.Wf.cols());
  g.Wi = g.Wf;
  g.Wo = g.Wf;
  g.Wc = g.Wf;
  g.bf = Eigen::VectorXd::Zero(p.bf.size());
  g.bi = g.bf;
  g.bo = g.bf;
  g.bc = g.bf;
  g.Wy = Eigen::MatrixXd::Zero(p.Wy.rows(), p.Wy.cols());
  g.by = Eigen::VectorXd::Zero(p.by.size());
  return g;
}

void LstmGrads::add(const LstmGrads& o) {
  embed += o.embed;
  Wf += o.Wf;
  Wi += o.Wi;
  Wo += o.Wo;
  Wc += o.Wc;
  bf += o.bf;
  bi += o.bi;
  bo += o.bo;
  bc += o.bc;
  Wy += o.Wy;
  by += o.by;
}

void LstmGrads::scale(double s) {
  embed *= s;
  Wf *= s;
  Wi *= s;
  Wo *= s;
  Wc *= s;
  bf *= s;
  bi *= s;
  bo *= s;
  bc *= s;
  Wy *= s;
  by *= s;
}

double LstmGrads::global_norm() const {
  double sq = embed.squaredNorm() + Wf.squaredNorm() + Wi.squaredNorm() +
              Wo.squaredNorm() + Wc.squaredNorm() + bf.squaredNorm() +
              bi.squaredNorm() + bo.squaredNorm() + bc.squaredNorm() +
              Wy.squaredNorm() + by.squaredNorm();
  return std::sqrt(sq);
}

void LstmGrads::clip_global_norm(double max_norm) {
  if (max_norm <= 0.0) return;
  double norm = global_norm();
  if (norm > max_norm) scale(max_norm / norm);
}

LstmGrads backward(const LstmParams& p, const ForwardCache& cache,
                   const Eigen::VectorXd& target) {
  const int H = p.hidden_dim;
  const int E = p.embed_dim;
  const int T = static_cast<int>(cache.ids.size());
  LstmGrads g = LstmGrads::zeros(p);

  // Sigmoid + BCE cancel to probs - target at the logits.
  Eigen::VectorXd dy = cache.probs - target;
  g.Wy = dy * cache.h.back().transpose();
  g.by = dy;

  Eigen::VectorXd dh = p.Wy.transpose() * dy;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd z(H + E);

  for (int t = T - 1; t >= 0; --t) {
    const Eigen::VectorXd& c_t = cache.c[t];
    const Eigen::VectorXd c_prev =
        t > 0 ? cache.c[t - 1] : Eigen::VectorXd::Zero(H);
    const Eigen::VectorXd h_prev =
        t > 0 ? cache.h[t - 1] : Eigen::VectorXd::Zero(H);
    Eigen::VectorXd tanh_c = c_t.array().tanh();

    Eigen::VectorXd do_ = dh.cwiseProduct(tanh_c);
    dc += dh.cwiseProduct(cache.o[t])
              .cwiseProduct((1.0 - tanh_c.array().square()).matrix());

    Eigen::VectorXd df = dc.cwiseProduct(c_prev);
    Eigen::VectorXd di = dc.cwiseProduct(cache.cbar[t]);
    Eigen::VectorXd dcbar = dc.cwiseProduct(cache.i[t]);

    Eigen::VectorXd daf = df.cwiseProduct(cache.f[t])
                              .cwiseProduct((1.0 - cache.f[t].array()).matrix());
    Eigen::VectorXd dai = di.cwiseProduct(cache.i[t])
                              .cwiseProduct((1.0 - cache.i[t].array()).matrix());
    Eigen::VectorXd dao = do_.cwiseProduct(cache.o[t])
                              .cwiseProduct((1.0 - cache.o[t].array()).matrix());
    Eigen::VectorXd dac =
        dcbar.cwiseProduct((1.0 - cache.cbar[t].array().square()).matrix());

    z.head(H) = h_prev;
    z.tail(E) = cache.x[t];
    g.Wf += daf * z.transpose();
    g.Wi += dai * z.transpose();
    g.Wo += dao * z.transpose();
    g.Wc += dac * z.transpose();
    g.bf += daf;
    g.bi += dai;
    g.bo += dao;
    g.bc += dac;

    Eigen::VectorXd dz = p.Wf.transpose() * daf + p.Wi.transpose() * dai +
                         p.Wo.transpose() * dao + p.Wc.transpose() * dac;
    g.embed.row(cache.ids[t]) += dz.tail(E).transpose();
    dh = dz.head(H);
    dc = dc.cwiseProduct(cache.f[t]);
  }
  return g;
}

RmspropState RmspropState::init(const LstmParams& p) {
  return {LstmGrads::zeros(p)};
}

namespace {

void rmsprop_tensor(Eigen::Ref<Eigen::MatrixXd> theta,
                    const Eigen::MatrixXd& grad, Eigen::Ref<Eigen::MatrixXd> s,
                    const TrainConfig& cfg) {
  if (!grad.allFinite()) throw Error("non-finite gradient; aborting epoch");
  s = cfg.rmsprop_decay * s +
      (1.0 - cfg.rmsprop_decay) * grad.array().square().matrix();
  theta -= (cfg.learning_rate * grad.array() /
            (s.array().sqrt() + cfg.rmsprop_epsilon))
               .matrix();
}

}  // namespace

void rmsprop_step(LstmParams& p, const LstmGrads& g, RmspropState& state,
                  const TrainConfig& cfg) {
  rmsprop_tensor(p.embed, g.embed, state.sq.embed, cfg);
  rmsprop_tensor(p.Wf, g.Wf, state.sq.Wf, cfg);
  rmsprop_tensor(p.Wi, g.Wi, state.sq.Wi, cfg);
  rmsprop_tensor(p.Wo, g.Wo, state.sq.Wo, cfg);
  rmsprop_tensor(p.Wc, g.Wc, state.sq.Wc, cfg);
  rmsprop_tensor(p.bf, g.bf, state.sq.bf, cfg);
  rmsprop_tensor(p.bi, g.bi, state.sq.bi, cfg);
  rmsprop_tensor(p.bo, g.bo, state.sq.bo, cfg);
  rmsprop_tensor(p.bc, g.bc, state.sq.bc, cfg);
  rmsprop_tensor(p.Wy, g.Wy, state.sq.Wy, cfg);
  rmsprop_tensor(p.by, g.by, state.sq.by, cfg);
}

namespace {

double mean_loss(const LstmParams& p, const std::vector<Sample>& samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const Sample& s : samples) {
    total += bce_loss(forward(p, s.ids).probs, s.target);
  }
  return total / samples.size();
}

}  // namespace

TrainReport train(LstmParams& p, const std::vector<Sample>& train_samples,
                  const std::vector<Sample>& val_samples,
                  const TrainConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (train_samples.empty()) throw Error("train: no training samples");
  if (val_samples.empty()) throw Error("train: no validation samples");
  for (const Sample& s : train_samples) {
    if (s.ids.empty()) throw Error("train: sample with empty sequence");
  }

  std::mt19937 rng(cfg.seed);
  std::vector<int> train_idx(train_samples.size());
  std::iota(train_idx.begin(), train_idx.end(), 0);

  TrainReport report;
  RmspropState opt = RmspropState::init(p);

  double best_val = mean_loss(p, val_samples);
  report.val_loss.push_back(best_val);
  LstmParams best = p;
  int best_epoch = 0;
  int since_best = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t at = 0; at < train_idx.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end =
          std::min(at + static_cast<std::size_t>(cfg.batch_size),
                   train_idx.size());
      LstmGrads acc = LstmGrads::zeros(p);
      for (std::size_t k = at; k < end; ++k) {
        const Sample& s = train_samples[train_idx[k]];
        ForwardCache cache = forward(p, s.ids);
        epoch_loss += bce_loss(cache.probs, s.target);
        acc.add(backward(p, cache, s.target));
      }
      acc.scale(1.0 / static_cast<double>(end - at));
      acc.clip_global_norm(cfg.grad_clip_norm);
      rmsprop_step(p, acc, opt, cfg);
    }
    report.train_loss.push_back(epoch_loss / train_idx.size());

    double val = mean_loss(p, val_samples);
    report.val_loss.push_back(val);
    if (val < best_val - 1e-12) {
      best_val = val;
      best = p;
      best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      report.stopped_epoch = epoch;
      break;
    }
    report.stopped_epoch = epoch;
  }

  p = best;
  report.best_epoch = best_epoch;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report.checksum = params_checksum(p);
  return report;
}

TrainReport train(LstmParams& p, const std::vector<Sample>& samples,
                  const TrainConfig& cfg) {
  if (samples.size() < 2) throw Error("train: need at least two samples");
  std::mt19937 rng(cfg.seed ^ 0x9e3779b9u);
  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(cfg.validation_fraction * samples.size()));
  if (n_val >= samples.size()) n_val = samples.size() / 2;
  std::vector<Sample> val_s, train_s;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_val ? val_s : train_s).push_back(samples[order[k]]);
  }
  return train(p, train_s, val_s, cfg);
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const unsigned char* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
}

void hash_tensor(std::uint64_t& h, const Eigen::MatrixXd& m) {
  hash_bytes(h, m.data(), sizeof(double) * m.size());
}
void hash_tensor(std::uint64_t& h, const Eigen::VectorXd& v) {
  hash_bytes(h, v.data(), sizeof(double) * v.size());
}

}  // namespace

std::uint64_t params_checksum(const LstmParams& p) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  hash_tensor(h, p.embed);
  hash_tensor(h, p.Wf);
  hash_tensor(h, p.Wi);
  hash_tensor(h, p.Wo);
  hash_tensor(h, p.Wc);
  hash_tensor(h, p.bf);
  hash_tensor(h, p.bi);
  hash_tensor(h, p.bo);
  hash_tensor(h, p.bc);
  hash_tensor(h, p.Wy);
  hash_tensor(h, p.by);
  return h;
}

namespace {

std::vector<double*> param_cells(LstmParams& p) {
  std::vector<double*> cells;
  auto push = [&cells](auto& m) {
    double* d = m.data();
    for (Eigen::Index k = 0; k < m.size(); ++k) cells.push_back(d + k);
  };
  push(p.embed);
  push(p.Wf);
  push(p.Wi);
  push(p.Wo);
  push(p.Wc);
  push(p.bf);
  push(p.bi);
  push(p.bo);
  push(p.bc);
  push(p.Wy);
  push(p.by);
  return cells;
}

std::vector<double> grad_cells(const LstmGrads& g) {
  std::vector<double> cells;
  auto push = [&cells](const auto& m) {
    const double* d = m.data();
    cells.insert(cells.end(), d, d + m.size());
  };
  push(g.embed);
  push(g.Wf);
  push(g.Wi);
  push(g.Wo);
  push(g.Wc);
  push(g.bf);
  push(g.bi);
  push(g.bo);
  push(g.bc);
  push(g.Wy);
  push(g.by);
  return cells;
}

}  // namespace

double finite_difference_max_error(int vocab_size, int embed_dim,
                                   int hidden_dim, int seq_len, unsigned seed) {
  LstmParams p = LstmParams::init(vocab_size, embed_dim, hidden_dim, seed);
  std::mt19937 rng(seed ^ 0x51ed270bu);
  std::vector<int> seq;
  for (int t = 0; t < seq_len; ++t) {
    seq.push_back(std::uniform_int_distribution<int>(0, vocab_size)(rng));
  }
  Eigen::VectorXd target(kGoalBits);
  for (int b = 0; b < kGoalBits; ++b) {
    target[b] = std::uniform_int_distribution<int>(0, 1)(rng);
  }

  LstmGrads g = backward(p, forward(p, seq), target);
  std::vector<double> analytic = grad_cells(g);
  std::vector<double*> cells = param_cells(p);

  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    double saved = *cells[k];
    *cells[k] = saved + h;
    double up = bce_loss(forward(p, seq).probs, target);
    *cells[k] = saved - h;
    double down = bce_loss(forward(p, seq).probs, target);
    *cells[k] = saved;
    double fd = (up - down) / (2.0 * h);
    // Floor the denominator so the difference quotient's noise floor does
    // not dominate near-zero gradients.
    double rel = std::abs(fd - analytic[k]) /
                 std::max(1e-4, std::abs(fd) + std::abs(analytic[k]));
    worst = std::max(worst, rel);
  }
  return worst;
}

namespace {

constexpr char kMagic[4] = {'G', 'R', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      double v = m(r, c);
      os.write(reinterpret_cast<const char*>(&v), 8);
    }
  }
}
void read_matrix(std::istream& is, Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      double v;
      is.read(reinterpret_cast<char*>(&v), 8);
      m(r, c) = v;
    }
  }
}
void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
  os.write(reinterpret_cast<const char*>(v.data()), 8 * v.size());
}
void read_vector(std::istream& is, Eigen::VectorXd& v) {
  is.read(reinterpret_cast<char*>(v.data()), 8 * v.size());
}

}  // namespace

void save_checkpoint(const std::string& path, const LstmParams& p,
                     const Vocabulary& vocab, const std::string& meta_json) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write checkpoint " + path);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(p.vocab_size));
  write_u32(os, static_cast<std::uint32_t>(p.embed_dim));
  write_u32(os, static_cast<std::uint32_t>(p.hidden_dim));
  write_u32(os, static_cast<std::uint32_t>(meta_json.size()));
  os.write(meta_json.data(), static_cast<std::streamsize>(meta_json.size()));
  write_matrix(os, p.embed);
  write_matrix(os, p.Wf);
  write_vector(os, p.bf);
  write_matrix(os, p.Wi);
  write_vector(os, p.bi);
  write_matrix(os, p.Wo);
  write_vector(os, p.bo);
  write_matrix(os, p.Wc);
  write_vector(os, p.bc);
  write_matrix(os, p.Wy);
  write_vector(os, p.by);
  write_u32(os, static_cast<std::uint32_t>(vocab.size()));
  for (StateCode c : vocab.codes()) {
    os.write(reinterpret_cast<const char*>(&c), 8);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read checkpoint " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw Error("not a model checkpoint: " + path);
  }
  if (read_u32(is) != kVersion) throw Error("unsupported checkpoint version");
  Checkpoint ck;
  LstmParams& p = ck.params;
  p.vocab_size = static_cast<int>(read_u32(is));
  p.embed_dim = static_cast<int>(read_u32(is));
  p.hidden_dim = static_cast<int>(read_u32(is));
  std::uint32_t meta_len = read_u32(is);
  ck.meta_json.resize(meta_len);
  is.read(ck.meta_json.data(), meta_len);

  const int H = p.hidden_dim, E = p.embed_dim;
  p.embed.resize(p.vocab_size + 1, E);
  p.Wf.resize(H, H + E);
  p.Wi.resize(H, H + E);
  p.Wo.resize(H, H + E);
  p.Wc.resize(H, H + E);
  p.bf.resize(H);
  p.bi.resize(H);
  p.bo.resize(H);
  p.bc.resize(H);
  p.Wy.resize(kGoalBits, H);
  p.by.resize(kGoalBits);
  read_matrix(is, p.embed);
  read_matrix(is, p.Wf);
  read_vector(is, p.bf);
  read_matrix(is, p.Wi);
  read_vector(is, p.bi);
  read_matrix(is, p.Wo);
  read_vector(is, p.bo);
  read_matrix(is, p.Wc);
  read_vector(is, p.bc);
  read_matrix(is, p.Wy);
  read_vector(is, p.by);

  std::uint32_t n_codes = read_u32(is);
  for (std::uint32_t k = 0; k < n_codes; ++k) {
    StateCode c = 0;
    is.read(reinterpret_cast<char*>(&c), 8);
    ck.vocab.add(c);
  }
  ck.vocab.freeze();
  if (!is) throw Error("truncated checkpoint " + path);
  return ck;
}

Prediction predict_goal(const LstmParams& p, const Vocabulary& vocab,
                        const std::vector<StateCode>& state_codes,
                        const std::vector<StateCode>& candidates) {
  if (state_codes.empty()) throw Error("predict_goal: empty state sequence");
  if (candidates.empty()) throw Error("predict_goal: no candidate goals");
  std::vector<int> ids;
  ids.reserve(state_codes.size());
  for (StateCode c : state_codes) ids.push_back(vocab.id(c));

  ForwardCache cache = forward(p, ids);
  Prediction pred;
  for (int b = 0; b < kGoalBits; ++b) pred.probs[b] = cache.probs[b];
  pred.nearest = nearest_valid(pred.probs, candidates);
  pred.candidate_index = pred.nearest.index;
  return pred;
}

Eigen::VectorXd target_from_code(StateCode code) {
  Eigen::VectorXd t(kGoalBits);
  for (int b = 0; b < kGoalBits; ++b) t[b] = code_bit(code, b);
  return t;
}

}  // namespace grlab
