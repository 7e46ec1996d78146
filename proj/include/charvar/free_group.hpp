// Free groups F_n, their automorphisms, and representations into SU(2).
//
// A word is a freely reduced sequence of signed generator indices: +i is X_i
// and -i is X_i^-1, with 1 <= i <= rank. Automorphisms are stored together
// with an explicit inverse which is checked when the value is built.

#ifndef CHARVAR_FREE_GROUP_HPP
#define CHARVAR_FREE_GROUP_HPP

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charvar/su2.hpp"

namespace charvar {

class Word {
public:
  /// The empty word of the given rank.
  explicit Word(int rank);

  /// Freely reduces `letters`. Throws std::invalid_argument if a letter is 0
  /// or exceeds the rank in absolute value.
  static Word reduce(int rank, std::span<const int> letters);
  static Word reduce(int rank, std::initializer_list<int> letters) {
    return reduce(rank, std::span<const int>(letters.begin(), letters.size()));
  }
  static Word generator(int rank, int index);

  int rank() const { return rank_; }
  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;

  /// Concatenation followed by free reduction.
  friend Word operator*(const Word& u, const Word& v);
  friend bool operator==(const Word&, const Word&) = default;

private:
  int rank_;
  std::vector<int> letters_;
};

/// Letter syntax for ranks up to 26: "A B a c", uppercase is X_1 = A, X_2 = B,
/// ..., lowercase the inverse. Whitespace is optional; "1" is the empty word.
Word parse_word(std::string_view text, int rank);
std::string to_string(const Word& w);

/// X_0 = X_n^-1 ... X_1^-1, the word of the remaining boundary circle.
Word boundary_word(int n);

/// Relabels a word of F_{n-1} into F_n, skipping generator slot j
/// (X_i -> X_i for i < j, X_i -> X_{i+1} for i >= j).
Word iota(int j, const Word& w, int n);

class Endomorphism {
public:
  /// images[i] is the image of X_{i+1}; every image must have the given rank.
  Endomorphism(int rank, std::vector<Word> images);

  static Endomorphism identity(int rank);

  int rank() const { return rank_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int generator) const { return images_.at(generator - 1); }

  /// Substitutes every letter by its (possibly inverted) image and reduces.
  Word apply(const Word& w) const;

  bool is_identity() const;

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;

private:
  int rank_;
  std::vector<Word> images_;
};

inline Word apply_endo(const Endomorphism& phi, const Word& w) { return phi.apply(w); }

/// (phi o psi)(X_i) = phi(psi(X_i)).
Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi);

class Automorphism {
public:
  /// Throws std::invalid_argument unless forward o backward and
  /// backward o forward both fix every generator.
  Automorphism(Endomorphism forward, Endomorphism backward);

  static Automorphism identity(int rank);

  int rank() const { return forward_.rank(); }
  const Endomorphism& forward() const { return forward_; }
  const Endomorphism& backward() const { return backward_; }
  Automorphism inverse() const;

  Word apply(const Word& w) const { return forward_.apply(w); }

  friend bool operator==(const Automorphism&, const Automorphism&) = default;

private:
  Endomorphism forward_;
  Endomorphism backward_;
};

Automorphism compose(const Automorphism& phi, const Automorphism& psi);

/// Conjugation w -> g w g^-1.
Automorphism inner(const Word& g);

/// A point of Hom(F_n, SU(2)): the images of X_1, ..., X_n.
class Representation {
public:
  explicit Representation(std::vector<GroupElement> images);

  static Representation identity(int rank);
  static Representation haar(int rank, RngStream& rng);

  int rank() const { return static_cast<int>(images_.size()); }
  const std::vector<GroupElement>& images() const { return images_; }
  const GroupElement& image(int generator) const { return images_.at(generator - 1); }

private:
  std::vector<GroupElement> images_;
};

GroupElement evaluate(const Word& w, const Representation& rho);

/// Left action rho -> rho o phi^-1: generator i is sent to
/// evaluate(phi.backward(X_i), rho).
Representation act_on_rep(const Automorphism& phi, const Representation& rho);

/// Conjugates every generator image by g.
Representation conjugate(const Representation& rho, const GroupElement& g);

struct NamedAutomorphism {
  std::string name;
  Automorphism automorphism;
};

/// Generator catalog for Aut(F_n), every entry with its verified inverse.
///
///   swap(i,j)   X_i <-> X_j
///   inv(i)      X_i -> X_i^-1
///   rmul(i,j)   X_i -> X_i X_j        lmul(i,j)  X_i -> X_j X_i
///   sigma(i)    X_i -> X_{i+1}, X_{i+1} -> X_{i+1}^-1 X_i X_{i+1}
///   twist(i)    X_i, X_{i+1} conjugated by X_i X_{i+1}
///   alpha       (n = 3) A -> A, B -> B A^-1, C -> A C
///   gamma       (n = 3) A -> C A, B -> B, C -> C
///
/// Throws std::invalid_argument for n < 2.
std::vector<NamedAutomorphism> named_generators(int n);

/// Resolves catalog entry names and the group names "nielsen"
/// (swap, inv, rmul, lmul), "braids" (sigma) and "twists". Throws
/// std::invalid_argument for unknown names.
std::vector<NamedAutomorphism> resolve_generators(int n, std::span<const std::string> names);

const Automorphism& find_generator(const std::vector<NamedAutomorphism>& catalog,
                                   std::string_view name);

/// I_j: extends an automorphism of F_{n-1} to F_n fixing X_j, so that
/// stabilize(j, phi, n) o iota_j = iota_j o phi.
Automorphism stabilize(int j, const Automorphism& phi, int n);

/// Square integer matrix, row-major.
class IntMatrix {
public:
  explicit IntMatrix(int n);
  IntMatrix(int n, std::vector<std::int64_t> row_major);
  static IntMatrix identity(int n);

  int size() const { return n_; }
  std::int64_t operator()(int row, int col) const { return data_[row * n_ + col]; }
  std::int64_t& operator()(int row, int col) { return data_[row * n_ + col]; }
  const std::vector<std::int64_t>& data() const { return data_; }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  int n_;
  std::vector<std::int64_t> data_;
};

/// Exact determinant (fraction-free Bareiss elimination).
std::int64_t determinant(const IntMatrix& m);

/// Column i is the exponent-sum vector of phi(X_i).
IntMatrix abelianization_matrix(const Endomorphism& phi);

}  // namespace charvar

#endif  // CHARVAR_FREE_GROUP_HPP
