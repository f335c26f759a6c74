#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfasat/cnf.hpp"
#include "nfasat/sample.hpp"

namespace nfasat {

/// The four SAT models of k-state NFA inference.
enum class ModelKind {
  Direct,  // DM: one Tseitin variable per c_path
  Prefix,  // PM: path variables shared along the prefix tree
  Suffix,  // SM: path variables shared along the suffix tree
  Hybrid,  // HM: each word split into a PM prefix and an SM suffix
};

std::string_view to_string(ModelKind kind);
/// Accepts dm/pm/sm/hm (case-insensitive). Throws InvalidArgument otherwise.
ModelKind parse_model_kind(std::string_view text);

/// Clause families, used as CnfInstance tags so generated counts can be
/// compared with the closed-form bounds family by family.
enum class ClauseFamily : CnfInstance::Tag {
  Lambda = 1,    // unit f_1 / -f_1 for the empty word
  DmPathDef,     // -aux v lit, one per literal of c_path & f_j
  DmPathRev,     // aux v -c_path v -f_j
  DmPathOr,      // OR of the word's path auxiliaries
  DmReject,      // -c_path v -f_j
  AcceptDef,     // -aux_{w,i} v path(w,1,i), -aux_{w,i} v f_i
  AcceptRev,     // aux_{w,i} v -path(w,1,i) v -f_i
  AcceptOr,      // OR_i aux_{w,i}
  Reject,        // -path(w,1,i) v -f_i
  PrefRecPath,   // -aux_{v,a,j,i} v trp(v,j)
  PrefRecTrans,  // -aux_{v,a,j,i} v delta(a,j,i)
  PrefRecRev,    // aux v -trp(v,j) v -delta(a,j,i)
  PrefRecCover,  // -trp(w,i) v OR_j aux_{v,a,j,i}
  PrefRecImply,  // trp(w,i) v -aux_{v,a,j,i}
  SufRecPath,    // -aux_{v,a,i,k,j} v paths(v,k,j)
  SufRecTrans,   // -aux_{v,a,i,k,j} v delta(a,i,k)
  SufRecRev,     // aux v -paths(v,k,j) v -delta(a,i,k)
  SufRecCover,   // -paths(w,i,j) v OR_k aux_{v,a,i,k,j}
  SufRecImply,   // paths(w,i,j) v -aux_{v,a,i,k,j}
  HybReject,     // -trp(p,j) v -paths(s,j,k) v -f_k
  HybDef,        // -aux_{w,j,k} v each conjunct
  HybRev,        // aux_{w,j,k} v -trp(p,j) v -paths(s,j,k) v -f_k
  HybOr,         // OR_{j,k} aux_{w,j,k}
};

inline constexpr ClauseFamily kAllClauseFamilies[] = {
    ClauseFamily::Lambda,       ClauseFamily::DmPathDef,    ClauseFamily::DmPathRev,   ClauseFamily::DmPathOr,
    ClauseFamily::DmReject,     ClauseFamily::AcceptDef,    ClauseFamily::AcceptRev,   ClauseFamily::AcceptOr,
    ClauseFamily::Reject,       ClauseFamily::PrefRecPath,  ClauseFamily::PrefRecTrans, ClauseFamily::PrefRecRev,
    ClauseFamily::PrefRecCover, ClauseFamily::PrefRecImply, ClauseFamily::SufRecPath,  ClauseFamily::SufRecTrans,
    ClauseFamily::SufRecRev,    ClauseFamily::SufRecCover,  ClauseFamily::SufRecImply, ClauseFamily::HybReject,
    ClauseFamily::HybDef,       ClauseFamily::HybRev,       ClauseFamily::HybOr,
};

std::string_view to_string(ClauseFamily family);

constexpr CnfInstance::Tag tag(ClauseFamily f) { return static_cast<CnfInstance::Tag>(f); }

struct EncodeOptions {
  /// Upper limit on stored literals; 0 disables the limit.
  std::uint64_t literal_budget = 50'000'000;
  /// Wall-clock limit for generation.
  std::optional<std::chrono::steady_clock::duration> time_limit;
};

/// Throws InvalidArgument for k == 0, InstanceTooLarge when the budget is
/// exceeded and GenerationTimeout when the time limit passes.
CnfInstance encode_dm(const Sample& sample, unsigned k, const EncodeOptions& options = {});
CnfInstance encode_pm(const Sample& sample, unsigned k, const EncodeOptions& options = {});
CnfInstance encode_sm(const Sample& sample, unsigned k, const EncodeOptions& options = {});
CnfInstance encode_hm(const Sample& sample, unsigned k, const SplitAssignment& cuts,
                      const EncodeOptions& options = {});

/// Dispatches on `kind`; `cuts` is required for the hybrid model.
CnfInstance encode(ModelKind kind, const Sample& sample, unsigned k, const SplitAssignment* cuts = nullptr,
                   const EncodeOptions& options = {});

struct FamilyBound {
  std::uint64_t clauses = 0;
  std::size_t max_arity = 0;
};

/// Closed-form upper bounds on the size of an encoding. Counts saturate at
/// UINT64_MAX.
struct SizeEstimate {
  std::map<ClauseFamily, FamilyBound> clauses;
  std::map<VarKind, std::uint64_t> vars;

  std::uint64_t var_bound() const;
  std::uint64_t clause_bound() const;
  /// Variable bound restricted to the families listed in the reference size
  /// tables (path variables of PM/SM are not listed there).
  std::uint64_t table_var_bound() const;
  /// Total literals the bounds allow; used for budget pre-checks.
  std::uint64_t literal_bound() const;
};

SizeEstimate estimate_size(ModelKind kind, const Sample& sample, unsigned k,
                           const SplitAssignment* cuts = nullptr);

/// Lists every family whose generated count or arity exceeds `estimate`.
/// Empty when the instance conforms.
std::vector<std::string> bound_violations(const CnfInstance& cnf, const SizeEstimate& estimate);

}  // namespace nfasat
