#ifndef GATEKV_ACL_PROCEDURES_HPP
#define GATEKV_ACL_PROCEDURES_HPP

#include <any>

#include "gatekv/acl/monitor.hpp"

namespace gatekv {

/// Waves everything through without requesting any layers. Used for the
/// unprotected baseline; decisions cost nothing and read nothing.
class AllowAllProcedure final : public DecisionProcedure {
 public:
  bool decide_read(const UserId&, const BoundObject&, const std::any&,
                   const SecurityLayers&) override {
    return true;
  }
  bool decide_update(const UserId&, const BoundObject&, const UpdateOp&, const std::any&,
                     const SecurityLayers&) override {
    return true;
  }
  bool decide_policy_read(const UserId&, const BoundObject&, const UserId&, const std::any&,
                          const SecurityLayers&) override {
    return true;
  }
  bool decide_policy_assign(const UserId&, const BoundObject&, const UserId&,
                            const PermissionSet&, const PermissionSet&, const std::any&,
                            const SecurityLayers&) override {
    return true;
  }
  LayerDefinition requested_policies(const UserId&, const BoundObject&) override {
    return {};
  }
};

/// Denies everything. Useful for asserting that denied operations leave no
/// trace in the store.
class DenyAllProcedure final : public DecisionProcedure {
 public:
  bool decide_read(const UserId&, const BoundObject&, const std::any&,
                   const SecurityLayers&) override {
    return false;
  }
  bool decide_update(const UserId&, const BoundObject&, const UpdateOp&, const std::any&,
                     const SecurityLayers&) override {
    return false;
  }
  bool decide_policy_read(const UserId&, const BoundObject&, const UserId&, const std::any&,
                          const SecurityLayers&) override {
    return false;
  }
  bool decide_policy_assign(const UserId&, const BoundObject&, const UserId&,
                            const PermissionSet&, const PermissionSet&, const std::any&,
                            const SecurityLayers&) override {
    return false;
  }
  LayerDefinition requested_policies(const UserId&, const BoundObject&) override {
    return {};
  }
};

/// Grants by token: reads need "read" on some layer, updates "write", policy
/// reads "read", policy assigns "admin". Layers are a single "object" layer
/// on the target itself. A small but honest procedure for store-level tests.
class TokenProcedure final : public DecisionProcedure {
 public:
  bool decide_read(const UserId&, const BoundObject&, const std::any&,
                   const SecurityLayers& layers) override {
    return layers.any_layer_grants("read");
  }
  bool decide_update(const UserId&, const BoundObject&, const UpdateOp&, const std::any&,
                     const SecurityLayers& layers) override {
    return layers.any_layer_grants("write");
  }
  bool decide_policy_read(const UserId&, const BoundObject&, const UserId&, const std::any&,
                          const SecurityLayers& layers) override {
    return layers.any_layer_grants("read");
  }
  bool decide_policy_assign(const UserId&, const BoundObject&, const UserId&,
                            const PermissionSet&, const PermissionSet&, const std::any&,
                            const SecurityLayers& layers) override {
    return layers.any_layer_grants("admin");
  }
  LayerDefinition requested_policies(const UserId&, const BoundObject& object) override {
    return {{{"object", object}}};
  }
};

}  // namespace gatekv

#endif  // GATEKV_ACL_PROCEDURES_HPP
