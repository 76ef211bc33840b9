#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wald/waldhausen.hpp"

namespace wald {

/// A morphism in a concrete backend.  Objects are small integers (pointed-set
/// size without basepoint, or F_p dimension); `data` is the function table or
/// the row-major matrix.
struct BMor {
    std::int32_t src = 0;
    std::int32_t tgt = 0;
    std::vector<std::uint8_t> data;

    friend bool operator==(const BMor&, const BMor&) = default;
    friend auto operator<=>(const BMor&, const BMor&) = default;
};

struct BCoproduct {
    std::int32_t apex = 0;
    std::vector<BMor> injections;
};

struct BPushout {
    std::int32_t apex = 0;
    BMor from_f;  // target(f) -> apex
    BMor from_g;  // target(g) -> apex
};

/// Exact-arithmetic ambient category: identities/composition, the cofibration
/// and weak-equivalence predicates, morphism enumeration, and native colimits
/// (these never truncate; `bound()` only limits which objects are
/// materialized into a FinCategory).
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string name() const = 0;
    virtual int bound() const = 0;

    virtual BMor identity(int a) const = 0;
    virtual BMor compose(const BMor& g, const BMor& f) const = 0;
    virtual bool is_cof(const BMor& m) const = 0;
    virtual bool is_we(const BMor& m) const = 0;

    /// All morphisms a -> b in a fixed lexicographic order.
    virtual std::vector<BMor> hom(int a, int b) const = 0;

    virtual BCoproduct coproduct(const std::vector<int>& objs) const = 0;
    /// Mediating map out of a coproduct for a cocone with common target.
    virtual BMor copair(const BCoproduct& cp,
                        const std::vector<BMor>& legs) const = 0;

    virtual BPushout pushout(const BMor& f, const BMor& g) const = 0;
    /// Mediating map out of a pushout for the commuting cocone (qf, qg).
    virtual BMor mediate(const BPushout& po, const BMor& qf,
                         const BMor& qg) const = 0;

    virtual std::string encode(const BMor& m) const = 0;
    virtual std::optional<BMor> decode(int src, int tgt,
                                       std::string_view text,
                                       std::string* error) const = 0;
};

/// Pointed finite sets {*, 1..k}; maps as tables over non-base points with 0
/// meaning the basepoint; C = injective, W = bijective.
class PSetBackend final : public Backend {
public:
    explicit PSetBackend(int n_max) : n_max_(n_max) {}

    std::string name() const override;
    int bound() const override { return n_max_; }
    BMor identity(int a) const override;
    BMor compose(const BMor& g, const BMor& f) const override;
    bool is_cof(const BMor& m) const override;
    bool is_we(const BMor& m) const override;
    std::vector<BMor> hom(int a, int b) const override;
    BCoproduct coproduct(const std::vector<int>& objs) const override;
    BMor copair(const BCoproduct& cp,
                const std::vector<BMor>& legs) const override;
    BPushout pushout(const BMor& f, const BMor& g) const override;
    BMor mediate(const BPushout& po, const BMor& qf,
                 const BMor& qg) const override;
    std::string encode(const BMor& m) const override;
    std::optional<BMor> decode(int src, int tgt, std::string_view text,
                               std::string* error) const override;

private:
    int n_max_;
};

/// F_p vector spaces by dimension; morphisms are row-major tgt x src
/// matrices; C = full column rank, W = invertible.
class VectBackend final : public Backend {
public:
    VectBackend(int p, int d_max) : p_(p), d_max_(d_max) {}

    int prime() const { return p_; }
    std::string name() const override;
    int bound() const override { return d_max_; }
    BMor identity(int a) const override;
    BMor compose(const BMor& g, const BMor& f) const override;
    bool is_cof(const BMor& m) const override;
    bool is_we(const BMor& m) const override;
    std::vector<BMor> hom(int a, int b) const override;
    BCoproduct coproduct(const std::vector<int>& objs) const override;
    BMor copair(const BCoproduct& cp,
                const std::vector<BMor>& legs) const override;
    BPushout pushout(const BMor& f, const BMor& g) const override;
    BMor mediate(const BPushout& po, const BMor& qf,
                 const BMor& qg) const override;
    std::string encode(const BMor& m) const override;
    std::optional<BMor> decode(int src, int tgt, std::string_view text,
                               std::string* error) const override;

    int rank(const BMor& m) const;

private:
    int p_;
    int d_max_;
};

/// A backend materialized as an explicit category with classes, plus the
/// id <-> concrete-morphism correspondence.
struct BackendCategory {
    std::shared_ptr<const Backend> backend;
    WaldhausenStructure S;
    std::vector<BMor> mor_of;      // MorId -> concrete morphism
    std::map<BMor, MorId> mor_id;  // concrete morphism -> MorId

    MorId id_of(const BMor& m) const {
        auto it = mor_id.find(m);
        return it == mor_id.end() ? kNoMor : it->second;
    }
};

BackendCategory materialize(std::shared_ptr<const Backend> backend);

/// Truncated pointed sets with objects 0..n_max; C = injections,
/// W = bijections, initial the one-point set.
BackendCategory pset_category(int n_max);

/// Truncated F_p vector spaces with dimensions 0..d_max; C = injective,
/// W = invertible, initial the zero space.
BackendCategory vect_category(int p, int d_max);

/// Parses a backend spec "pset:N" or "vect:P:D".
std::shared_ptr<const Backend> make_backend(std::string_view spec,
                                            std::string* error);

}  // namespace wald
