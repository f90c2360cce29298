public class Node {
    public boolean token;
    public Node head, tail;
    public Node() {
        this.token = false;
        this.head = this.tail = this;
    }
    public Node addNode() {
        Node p = new Node();
        p.head = this.tail;
        this.head = p;
        return p;
    }
    Node MoveNext () {
        return this.tail.head;
    }
    Node MoveBack () {
        return this.head.tail;
    }
}
