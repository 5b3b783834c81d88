#include "cessl/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cessl {

namespace {

constexpr const char* kMagic = "cessl-checkpoint v1";

std::string hexf(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void write_values(std::ostream& out, const char* tag, const double* p, std::size_t n) {
  out << tag;
  for (std::size_t i = 0; i < n; ++i) out << ' ' << hexf(p[i]);
  out << '\n';
}

void write_net(std::ostream& out, const char* name, const FeedForward& net) {
  out << "net " << name << ' ' << net.layers().size() << ' ' << net.adam_steps() << '\n';
  for (const auto& l : net.layers()) {
    out << "layer " << l.w.rows() << ' ' << l.w.cols() << ' ' << activation_name(l.act)
        << ' ' << hexf(l.leaky_slope) << '\n';
    write_values(out, "w", l.w.data().data(), l.w.size());
    write_values(out, "b", l.b.data(), l.b.size());
    write_values(out, "mw", l.m_w.data().data(), l.m_w.size());
    write_values(out, "vw", l.v_w.data().data(), l.v_w.size());
    write_values(out, "mb", l.m_b.data(), l.m_b.size());
    write_values(out, "vb", l.v_b.data(), l.v_b.size());
  }
}

void read_values(std::istream& in, const char* tag, double* p, std::size_t n) {
  std::string t;
  in >> t;
  if (t != tag) throw std::runtime_error("checkpoint: expected '" + std::string(tag) + "'");
  for (std::size_t i = 0; i < n; ++i) {
    std::string tok;
    in >> tok;
    p[i] = std::strtod(tok.c_str(), nullptr);
  }
}

FeedForward read_net(std::istream& in, const std::string& expected_name) {
  std::string tag, name;
  std::size_t nlayers;
  std::int64_t steps;
  in >> tag >> name >> nlayers >> steps;
  if (tag != "net" || name != expected_name)
    throw std::runtime_error("checkpoint: expected net '" + expected_name + "'");
  FeedForward net;
  for (std::size_t li = 0; li < nlayers; ++li) {
    std::size_t rows, cols;
    std::string act, slope;
    in >> tag >> rows >> cols >> act >> slope;
    if (tag != "layer") throw std::runtime_error("checkpoint: expected 'layer'");
    net.add_layer(rows, cols, activation_from_name(act));
    DenseLayer& l = net.layers().back();
    l.leaky_slope = std::strtod(slope.c_str(), nullptr);
    read_values(in, "w", l.w.data().data(), l.w.size());
    read_values(in, "b", l.b.data(), l.b.size());
    read_values(in, "mw", l.m_w.data().data(), l.m_w.size());
    read_values(in, "vw", l.v_w.data().data(), l.v_w.size());
    read_values(in, "mb", l.m_b.data(), l.m_b.size());
    read_values(in, "vb", l.v_b.data(), l.v_b.size());
  }
  net.set_adam_steps(steps);
  return net;
}

std::ifstream open_and_check(const std::string& path, std::string& kind,
                             std::uint64_t& rng_seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw std::runtime_error("checkpoint: bad magic in " + path);
  std::string tag;
  in >> tag >> kind;
  if (tag != "kind") throw std::runtime_error("checkpoint: expected 'kind'");
  in >> tag >> rng_seed;
  if (tag != "rng_seed") throw std::runtime_error("checkpoint: expected 'rng_seed'");
  return in;
}

}  // namespace

void save_generator(const GeneratorNet& g, const std::string& path, std::uint64_t rng_seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << kMagic << '\n';
  out << "kind generator\n";
  out << "rng_seed " << rng_seed << '\n';
  out << "latent_dim " << g.latent_dim << '\n';
  out << "out_dim " << g.out_dim << '\n';
  write_net(out, "net", g.net);
}

GeneratorNet load_generator(const std::string& path, std::uint64_t* rng_seed) {
  std::string kind;
  std::uint64_t seed = 0;
  std::ifstream in = open_and_check(path, kind, seed);
  if (kind != "generator") throw std::runtime_error("checkpoint: not a generator: " + path);
  if (rng_seed) *rng_seed = seed;
  GeneratorNet g;
  std::string tag;
  in >> tag >> g.latent_dim;
  if (tag != "latent_dim") throw std::runtime_error("checkpoint: expected 'latent_dim'");
  in >> tag >> g.out_dim;
  if (tag != "out_dim") throw std::runtime_error("checkpoint: expected 'out_dim'");
  g.net = read_net(in, "net");
  return g;
}

void save_discriminator(const DiscriminatorNet& d, const std::string& path,
                        std::uint64_t rng_seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << kMagic << '\n';
  out << "kind discriminator\n";
  out << "rng_seed " << rng_seed << '\n';
  out << "in_dim " << d.in_dim << '\n';
  out << "num_classes " << d.num_classes << '\n';
  write_net(out, "trunk", d.trunk);
  write_net(out, "real_head", d.real_head);
  write_net(out, "class_head", d.class_head);
}

DiscriminatorNet load_discriminator(const std::string& path, std::uint64_t* rng_seed) {
  std::string kind;
  std::uint64_t seed = 0;
  std::ifstream in = open_and_check(path, kind, seed);
  if (kind != "discriminator")
    throw std::runtime_error("checkpoint: not a discriminator: " + path);
  if (rng_seed) *rng_seed = seed;
  DiscriminatorNet d;
  std::string tag;
  in >> tag >> d.in_dim;
  if (tag != "in_dim") throw std::runtime_error("checkpoint: expected 'in_dim'");
  in >> tag >> d.num_classes;
  if (tag != "num_classes") throw std::runtime_error("checkpoint: expected 'num_classes'");
  d.trunk = read_net(in, "trunk");
  d.real_head = read_net(in, "real_head");
  d.class_head = read_net(in, "class_head");
  return d;
}

}  // namespace cessl
