/// Arena of `Node`s, mirroring
///
/// ```java
/// public Node() { this.token = false; this.head = this.tail = this; }
/// public Node addNode() { Node p = new Node(); p.head = this.tail; this.head = p; return p; }
/// Node MoveNext () { return this.tail.head; }
/// Node MoveBack () { return this.head.tail; }
/// ```
///
/// literally. `tail` is never reassigned, so it always points at the node
/// itself and both moves reduce to following `head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRing {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub token: bool,
    pub head: usize,
    pub tail: usize,
}

pub const ROOT: usize = 0;

impl NodeRing {
    /// A ring holding only its root.
    pub fn new(root_token: bool) -> Self {
        NodeRing { nodes: vec![Node { token: root_token, head: ROOT, tail: ROOT }] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn set_token(&mut self, id: usize, token: bool) {
        self.nodes[id].token = token;
    }

    /// `from.addNode()`.
    pub fn add_node(&mut self, from: usize) -> usize {
        let p = self.nodes.len();
        self.nodes.push(Node { token: false, head: p, tail: p });
        self.nodes[p].head = self.nodes[from].tail;
        self.nodes[from].head = p;
        p
    }

    /// `x.MoveNext()`.
    pub fn move_next(&self, x: usize) -> usize {
        self.nodes[self.nodes[x].tail].head
    }

    /// `x.MoveBack()`.
    pub fn move_back(&self, x: usize) -> usize {
        self.nodes[self.nodes[x].head].tail
    }
}
