// Copyright 2026 The regmart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef REGMART_COMPLEXITY_H_
#define REGMART_COMPLEXITY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regmart/stats.h"
#include "regmart/trees.h"

namespace regmart {

enum class ComplexityMode { kExact, kMonteCarlo, kSearchLowerBound, kGreedy };

std::string ComplexityModeName(ComplexityMode mode);

struct ComplexityReport {
  std::string measure;
  double value = 0.0;
  ComplexityMode mode = ComplexityMode::kExact;
  // Replications (Monte Carlo) or evaluations (search).
  std::uint64_t budget = 0;
  // FNV-1a digest of the tree the value refers to, if any.
  std::string tree_id;
  // Bracket for quantities that are not computed exactly.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double std_error = 0.0;
};

std::string TreeId(const DyadicTree& x);

// E |sup_f sum_t eps_t f(x_t(eps))| over all 2^n paths; `absolute` = false
// drops the outer absolute value.
double SeqRademacherExact(const FiniteFunctionClass& f_class,
                          const DyadicTree& x, bool absolute = true,
                          int limit = kDefaultExhaustiveLimit, int workers = 1);

Estimate SeqRademacherMonteCarlo(const FiniteFunctionClass& f_class,
                                 const DyadicTree& x, std::size_t paths,
                                 std::uint64_t seed, bool absolute = true);

struct WorstCaseResult {
  ComplexityReport report;
  DyadicTree tree;
  // Largest Rad(x) / (n^(1/r) sup_{f,t,eps} |f(x_t(eps))|) over evaluated
  // trees; filled when growth_r > 0.
  double best_ratio = 0.0;
};

// sup over trees of SeqRademacherExact. Exhaustive (flagged exact) when
// m^(2^n - 1) <= budget, otherwise random restarts each followed by greedy
// node-wise improvement, reported as a lower bound. The evaluation sequence
// for a given seed is a prefix of the one for any larger budget.
WorstCaseResult SeqRademacherWorstCase(const FiniteFunctionClass& f_class,
                                       int n, std::uint64_t budget,
                                       std::uint64_t seed,
                                       double growth_r = 0.0,
                                       bool absolute = true);

// E sup_f sum_t [4 c1 eps_t (f(x_t) - mu_t) - c2 (f(x_t) - mu_t)^2].
double OffsetRademacher(const FiniteFunctionClass& f_class, const DyadicTree& x,
                        const RealTree& mu, double c1, double c2,
                        int limit = kDefaultExhaustiveLimit);

// Outcome of a sequential cover search.
struct CoverResult {
  int size = 0;  // size of the best cover found
  int lower_bound = 0;
  bool exact = false;
  std::uint64_t nodes_visited = 0;
};

// Default cap on search nodes for the exact cover search.
inline constexpr std::uint64_t kDefaultCoverBudget = 20'000'000;

// Smallest alpha-cover of the class on x in normalized l_p (p >= 1), or in
// the max norm when p is infinite. Cover trees take values among the class
// values at each node and their pairwise midpoints. The exact search
// decides feasibility of k = 1, 2, ... trees by recursion over nodes,
// carrying per-(function, cover tree) accumulated distances down each
// branch. When the search budget runs out the size falls back to a greedy
// cover drawn from the class itself and the bracket is reported.
CoverResult CoveringNumber(const FiniteFunctionClass& f_class,
                           const DyadicTree& x, double alpha, double p,
                           std::uint64_t budget = kDefaultCoverBudget,
                           int limit = kDefaultExhaustiveLimit);

// Candidate cover values at node point `point`: class values and pairwise
// midpoints, sorted and deduplicated.
std::vector<double> CoverCandidates(const FiniteFunctionClass& f_class,
                                    PointId point);

// Default cap on memoized states for the fat-shattering recursion.
inline constexpr std::uint64_t kDefaultFatBudget = 50'000'000;

// Largest n <= n_max such that some depth-n tree over `points` (all points
// when empty) is shattered at scale alpha. Computed exactly by recursion on
// (surviving function subset, remaining depth): the root picks a point and
// a witness, which splits the survivors into the two children. Witnesses
// range over midpoints of value pairs at least alpha apart, which is
// without loss of generality.
int FatShattering(const FiniteFunctionClass& f_class, double alpha, int n_max,
                  std::span<const PointId> points = {},
                  std::uint64_t budget = kDefaultFatBudget);

// Pairwise midpoints of class values at `point` whose values differ by at
// least alpha.
std::vector<double> FatWitnesses(const FiniteFunctionClass& f_class,
                                 PointId point, double alpha);

// max over n in n_list of the searched ratio
// Rad_n(x) / (n^(1/r) sup_{f,t,eps} |f(x_t(eps))|), an empirical lower bound
// on the growth constant.
double GrowthConstant(const FiniteFunctionClass& f_class, double r,
                      std::span<const int> n_list, std::uint64_t budget,
                      std::uint64_t seed);

enum class OffsetBoundKind { kFinite, kParametric, kNonparametric };

struct OffsetBoundParams {
  double class_size = 1.0;  // finite
  double c_const = 0.0;     // parametric, nonparametric (required)
  double dimension = 0.0;   // parametric
  double q = 1.0;           // nonparametric, in (0, 2)
};

// 8 ln|F| / alpha; C d ln(n) / alpha; C alpha^(-(2-q)/(2+q)) n^(q/(2+q)).
double OffsetBound(OffsetBoundKind kind, const OffsetBoundParams& params,
                   double alpha, int n);
OffsetBoundKind ParseOffsetBoundKind(const std::string& name);

// D / (1 - 2^(-(r-p)/(r p))) for 1 <= p < r <= 2.
double CrpConstant(double d_const, double r, double p);
// D / (r - p) <= C_{r,p} <= 8 D / (r - p).
bool CrpSandwichHolds(double d_const, double r, double p);

}  // namespace regmart

#endif  // REGMART_COMPLEXITY_H_
