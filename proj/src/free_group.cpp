#include "charvar/free_group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace charvar {

namespace {

void check_rank(int rank) {
  if (rank < 1) throw std::invalid_argument("free group rank must be positive");
}

void require_same_rank(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": rank mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

// Appends `letter` to an already reduced sequence, cancelling if needed.
void push_reduced(std::vector<int>& out, int letter) {
  if (!out.empty() && out.back() == -letter) {
    out.pop_back();
  } else {
    out.push_back(letter);
  }
}

}  // namespace

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word Word::reduce(int rank, std::span<const int> letters) {
  Word w(rank);
  w.letters_.reserve(letters.size());
  for (int l : letters) {
    if (l == 0 || std::abs(l) > rank) {
      throw std::invalid_argument("Word: letter " + std::to_string(l) +
                                  " out of range for rank " + std::to_string(rank));
    }
    push_reduced(w.letters_, l);
  }
  return w;
}

Word Word::generator(int rank, int index) {
  const int letters[] = {index};
  return reduce(rank, letters);
}

Word Word::inverse() const {
  Word w(rank_);
  w.letters_.assign(letters_.rbegin(), letters_.rend());
  for (int& l : w.letters_) l = -l;
  return w;
}

Word operator*(const Word& u, const Word& v) {
  require_same_rank(u.rank_, v.rank_, "Word product");
  Word w = u;
  for (int l : v.letters_) push_reduced(w.letters_, l);
  return w;
}

Word parse_word(std::string_view text, int rank) {
  if (rank > 26) throw std::invalid_argument("parse_word: letter syntax supports rank <= 26");
  std::vector<int> letters;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || ch == '1') continue;
    if (std::isupper(c)) {
      letters.push_back(ch - 'A' + 1);
    } else if (std::islower(c)) {
      letters.push_back(-(ch - 'a' + 1));
    } else {
      throw std::invalid_argument(std::string("parse_word: unexpected character '") + ch + "'");
    }
  }
  return Word::reduce(rank, letters);
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (int l : w.letters()) {
    if (!out.empty()) out += ' ';
    if (w.rank() <= 26) {
      out += l > 0 ? static_cast<char>('A' + l - 1) : static_cast<char>('a' - l - 1);
    } else {
      out += l > 0 ? "X" + std::to_string(l) : "X" + std::to_string(-l) + "^-1";
    }
  }
  return out;
}

Word boundary_word(int n) {
  if (n < 2) throw std::invalid_argument("boundary_word: rank must be at least 2");
  std::vector<int> letters;
  for (int i = n; i >= 1; --i) letters.push_back(-i);
  return Word::reduce(n, letters);
}

Word iota(int j, const Word& w, int n) {
  if (j < 1 || j > n) throw std::invalid_argument("iota: slot j out of range");
  require_same_rank(w.rank(), n - 1, "iota");
  std::vector<int> letters;
  letters.reserve(w.length());
  for (int l : w.letters()) {
    const int i = std::abs(l);
    const int target = i < j ? i : i + 1;
    letters.push_back(l > 0 ? target : -target);
  }
  return Word::reduce(n, letters);
}

Endomorphism::Endomorphism(int rank, std::vector<Word> images)
    : rank_(rank), images_(std::move(images)) {
  check_rank(rank);
  if (static_cast<int>(images_.size()) != rank) {
    throw std::invalid_argument("Endomorphism: expected one image per generator");
  }
  for (const Word& w : images_) require_same_rank(w.rank(), rank, "Endomorphism image");
}

Endomorphism Endomorphism::identity(int rank) {
  std::vector<Word> images;
  for (int i = 1; i <= rank; ++i) images.push_back(Word::generator(rank, i));
  return Endomorphism(rank, std::move(images));
}

Word Endomorphism::apply(const Word& w) const {
  require_same_rank(w.rank(), rank_, "apply_endo");
  std::vector<int> out;
  for (int l : w.letters()) {
    const Word& img = images_[std::abs(l) - 1];
    if (l > 0) {
      for (int m : img.letters()) push_reduced(out, m);
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) {
        push_reduced(out, -*it);
      }
    }
  }
  return Word::reduce(rank_, out);
}

bool Endomorphism::is_identity() const { return *this == identity(rank_); }

Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi) {
  require_same_rank(phi.rank(), psi.rank(), "compose");
  std::vector<Word> images;
  images.reserve(psi.images().size());
  for (const Word& w : psi.images()) images.push_back(phi.apply(w));
  return Endomorphism(phi.rank(), std::move(images));
}

Automorphism::Automorphism(Endomorphism forward, Endomorphism backward)
    : forward_(std::move(forward)), backward_(std::move(backward)) {
  require_same_rank(forward_.rank(), backward_.rank(), "Automorphism");
  if (!compose(forward_, backward_).is_identity() || !compose(backward_, forward_).is_identity()) {
    throw std::invalid_argument("Automorphism: backward map is not a two-sided inverse");
  }
}

Automorphism Automorphism::identity(int rank) {
  return Automorphism(Endomorphism::identity(rank), Endomorphism::identity(rank));
}

Automorphism Automorphism::inverse() const { return Automorphism(backward_, forward_); }

Automorphism compose(const Automorphism& phi, const Automorphism& psi) {
  return Automorphism(compose(phi.forward(), psi.forward()),
                      compose(psi.backward(), phi.backward()));
}

Automorphism inner(const Word& g) {
  const int n = g.rank();
  const Word gi = g.inverse();
  std::vector<Word> fwd, bwd;
  for (int i = 1; i <= n; ++i) {
    const Word x = Word::generator(n, i);
    fwd.push_back(g * x * gi);
    bwd.push_back(gi * x * g);
  }
  return Automorphism(Endomorphism(n, std::move(fwd)), Endomorphism(n, std::move(bwd)));
}

Representation::Representation(std::vector<GroupElement> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("Representation: rank must be positive");
}

Representation Representation::identity(int rank) {
  check_rank(rank);
  return Representation(std::vector<GroupElement>(rank));
}

Representation Representation::haar(int rank, RngStream& rng) {
  check_rank(rank);
  std::vector<GroupElement> images;
  images.reserve(rank);
  for (int i = 0; i < rank; ++i) images.push_back(haar_sample(rng));
  return Representation(std::move(images));
}

GroupElement evaluate(const Word& w, const Representation& rho) {
  require_same_rank(w.rank(), rho.rank(), "evaluate");
  auto letter = [&](int l) {
    const GroupElement& x = rho.images()[std::abs(l) - 1];
    return l > 0 ? x : inverse(x);
  };
  const auto& letters = w.letters();
  if (letters.empty()) return GroupElement::identity();
  // Start from the first letter so single generators come back bit-exact.
  GroupElement g = letter(letters.front());
  for (std::size_t i = 1; i < letters.size(); ++i) g = g * letter(letters[i]);
  return g;
}

Representation act_on_rep(const Automorphism& phi, const Representation& rho) {
  require_same_rank(phi.rank(), rho.rank(), "act_on_rep");
  std::vector<GroupElement> images;
  images.reserve(rho.rank());
  for (const Word& w : phi.backward().images()) images.push_back(evaluate(w, rho));
  return Representation(std::move(images));
}

Representation conjugate(const Representation& rho, const GroupElement& g) {
  std::vector<GroupElement> images;
  images.reserve(rho.rank());
  const GroupElement gi = inverse(g);
  for (const auto& x : rho.images()) images.push_back(g * x * gi);
  return Representation(std::move(images));
}

namespace {

// Endomorphism equal to the identity except on the listed generators.
Endomorphism patch(int n, std::initializer_list<std::pair<int, std::vector<int>>> changes) {
  auto images = Endomorphism::identity(n).images();
  for (const auto& [gen, letters] : changes) images[gen - 1] = Word::reduce(n, letters);
  return Endomorphism(n, std::move(images));
}

std::string pair_name(const char* stem, int i, int j) {
  return std::string(stem) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string single_name(const char* stem, int i) {
  return std::string(stem) + "(" + std::to_string(i) + ")";
}

}  // namespace

std::vector<NamedAutomorphism> named_generators(int n) {
  if (n < 2) throw std::invalid_argument("named_generators: rank must be at least 2");
  std::vector<NamedAutomorphism> out;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      auto e = patch(n, {{i, {j}}, {j, {i}}});
      out.push_back({pair_name("swap", i, j), Automorphism(e, e)});
    }
  }
  for (int i = 1; i <= n; ++i) {
    auto e = patch(n, {{i, {-i}}});
    out.push_back({single_name("inv", i), Automorphism(e, e)});
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      out.push_back({pair_name("rmul", i, j),
                     Automorphism(patch(n, {{i, {i, j}}}), patch(n, {{i, {i, -j}}}))});
      out.push_back({pair_name("lmul", i, j),
                     Automorphism(patch(n, {{i, {j, i}}}), patch(n, {{i, {-j, i}}}))});
    }
  }
  for (int i = 1; i < n; ++i) {
    const int k = i + 1;
    out.push_back({single_name("sigma", i),
                   Automorphism(patch(n, {{i, {k}}, {k, {-k, i, k}}}),
                                patch(n, {{i, {i, k, -i}}, {k, {i}}}))});
  }
  for (int i = 1; i < n; ++i) {
    const int k = i + 1;
    // P = X_i X_k; forward conjugates by P, backward by P^-1.
    out.push_back({single_name("twist", i),
                   Automorphism(patch(n, {{i, {i, k, i, -k, -i}}, {k, {i, k, k, -k, -i}}}),
                                patch(n, {{i, {-k, -i, i, i, k}}, {k, {-k, -i, k, i, k}}}))});
  }
  if (n == 3) {
    out.push_back({"alpha", Automorphism(patch(3, {{2, {2, -1}}, {3, {1, 3}}}),
                                         patch(3, {{2, {2, 1}}, {3, {-1, 3}}}))});
    out.push_back({"gamma", Automorphism(patch(3, {{1, {3, 1}}}), patch(3, {{1, {-3, 1}}}))});
  }
  return out;
}

const Automorphism& find_generator(const std::vector<NamedAutomorphism>& catalog,
                                   std::string_view name) {
  for (const auto& entry : catalog) {
    if (entry.name == name) return entry.automorphism;
  }
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

std::vector<NamedAutomorphism> resolve_generators(int n, std::span<const std::string> names) {
  const auto catalog = named_generators(n);
  auto starts_with = [](const std::string& s, std::string_view prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
  };
  std::vector<NamedAutomorphism> out;
  for (const auto& name : names) {
    std::vector<std::string_view> prefixes;
    if (name == "nielsen") {
      prefixes = {"swap(", "inv(", "rmul(", "lmul("};
    } else if (name == "braids") {
      prefixes = {"sigma("};
    } else if (name == "twists") {
      prefixes = {"twist("};
    }
    if (prefixes.empty()) {
      out.push_back({name, find_generator(catalog, name)});
      continue;
    }
    for (const auto& entry : catalog) {
      for (auto p : prefixes) {
        if (starts_with(entry.name, p)) out.push_back(entry);
      }
    }
  }
  if (out.empty()) throw std::invalid_argument("resolve_generators: empty generator set");
  return out;
}

Automorphism stabilize(int j, const Automorphism& phi, int n) {
  if (j < 1 || j > n) throw std::invalid_argument("stabilize: slot j out of range");
  require_same_rank(phi.rank(), n - 1, "stabilize");
  auto extend = [&](const Endomorphism& e) {
    std::vector<Word> images;
    for (int i = 1; i <= n; ++i) {
      if (i == j) {
        images.push_back(Word::generator(n, j));
      } else {
        const int pre = i < j ? i : i - 1;
        images.push_back(iota(j, e.image(pre), n));
      }
    }
    return Endomorphism(n, std::move(images));
  };
  return Automorphism(extend(phi.forward()), extend(phi.backward()));
}

IntMatrix::IntMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 1) throw std::invalid_argument("IntMatrix: size must be positive");
}

IntMatrix::IntMatrix(int n, std::vector<std::int64_t> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (n < 1 || data_.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("IntMatrix: expected n*n entries");
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("IntMatrix product: size mismatch");
  IntMatrix c(a.n_);
  for (int i = 0; i < a.n_; ++i) {
    for (int k = 0; k < a.n_; ++k) {
      const auto aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::int64_t determinant(const IntMatrix& m) {
  const int n = m.size();
  std::vector<std::int64_t> a = m.data();
  auto at = [&](int r, int c) -> std::int64_t& { return a[r * n + c]; };
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r) {
        if (at(r, k) != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(at(k, c), at(swap_row, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntMatrix abelianization_matrix(const Endomorphism& phi) {
  const int n = phi.rank();
  IntMatrix m(n);
  for (int col = 0; col < n; ++col) {
    for (int l : phi.images()[col].letters()) m(std::abs(l) - 1, col) += l > 0 ? 1 : -1;
  }
  return m;
}

}  // namespace charvar
