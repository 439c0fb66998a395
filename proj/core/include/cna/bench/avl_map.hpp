#pragma once

#include <cstdint>
#include <memory>

namespace cna::bench {

// Ordered int64 -> int64 map backed by an AVL tree. Not thread safe; the
// benchmark serializes access through the evaluated lock, which is the
// point of the exercise.
class AvlMap {
 public:
  AvlMap() = default;

  // Returns true when the key was absent; an existing key gets the new value.
  bool insert(int64_t key, int64_t value) {
    bool added = false;
    root_ = insert_at(std::move(root_), key, value, added);
    if (added) ++size_;
    return added;
  }

  bool erase(int64_t key) {
    bool removed = false;
    root_ = erase_at(std::move(root_), key, removed);
    if (removed) --size_;
    return removed;
  }

  bool contains(int64_t key) const {
    const Node* n = root_.get();
    while (n) {
      if (key == n->key) return true;
      n = key < n->key ? n->left.get() : n->right.get();
    }
    return false;
  }

  const int64_t* find(int64_t key) const {
    const Node* n = root_.get();
    while (n) {
      if (key == n->key) return &n->value;
      n = key < n->key ? n->left.get() : n->right.get();
    }
    return nullptr;
  }

  uint64_t size() const { return size_; }

  int height() const { return height_of(root_.get()); }

 private:
  struct Node {
    int64_t key;
    int64_t value;
    int height = 1;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };
  using Ptr = std::unique_ptr<Node>;

  static int height_of(const Node* n) { return n ? n->height : 0; }

  static void update(Node* n) {
    const int hl = height_of(n->left.get());
    const int hr = height_of(n->right.get());
    n->height = (hl > hr ? hl : hr) + 1;
  }

  static int balance_of(const Node* n) {
    return height_of(n->left.get()) - height_of(n->right.get());
  }

  static Ptr rotate_right(Ptr n) {
    Ptr l = std::move(n->left);
    n->left = std::move(l->right);
    update(n.get());
    l->right = std::move(n);
    update(l.get());
    return l;
  }

  static Ptr rotate_left(Ptr n) {
    Ptr r = std::move(n->right);
    n->right = std::move(r->left);
    update(n.get());
    r->left = std::move(n);
    update(r.get());
    return r;
  }

  static Ptr rebalance(Ptr n) {
    update(n.get());
    const int b = balance_of(n.get());
    if (b > 1) {
      if (balance_of(n->left.get()) < 0) n->left = rotate_left(std::move(n->left));
      return rotate_right(std::move(n));
    }
    if (b < -1) {
      if (balance_of(n->right.get()) > 0) {
        n->right = rotate_right(std::move(n->right));
      }
      return rotate_left(std::move(n));
    }
    return n;
  }

  static Ptr insert_at(Ptr n, int64_t key, int64_t value, bool& added) {
    if (!n) {
      added = true;
      Ptr fresh = std::make_unique<Node>();
      fresh->key = key;
      fresh->value = value;
      return fresh;
    }
    if (key == n->key) {
      n->value = value;
      return n;
    }
    if (key < n->key) {
      n->left = insert_at(std::move(n->left), key, value, added);
    } else {
      n->right = insert_at(std::move(n->right), key, value, added);
    }
    return rebalance(std::move(n));
  }

  static Ptr erase_at(Ptr n, int64_t key, bool& removed) {
    if (!n) return n;
    if (key < n->key) {
      n->left = erase_at(std::move(n->left), key, removed);
    } else if (key > n->key) {
      n->right = erase_at(std::move(n->right), key, removed);
    } else {
      removed = true;
      if (!n->left) return std::move(n->right);
      if (!n->right) return std::move(n->left);
      // Replace with the in-order successor, then drop that leaf-ward node.
      Node* succ = n->right.get();
      while (succ->left) succ = succ->left.get();
      n->key = succ->key;
      n->value = succ->value;
      bool dropped = false;
      n->right = erase_at(std::move(n->right), n->key, dropped);
    }
    return rebalance(std::move(n));
  }

  Ptr root_;
  uint64_t size_ = 0;
};

}  // namespace cna::bench
