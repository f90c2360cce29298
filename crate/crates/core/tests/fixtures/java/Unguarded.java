public class Unguarded {
    private int total;

    public Unguarded() {
        total = 0;
    }

    public void add(int v) {
        total = total + v;
    }

    private void W(int k){
        int i, j;
        for(i = 0; i < 10 ; i++)
            for(j = 0; j < 10 ; j++) k+=i*10+j;
        System.out.println("k = " + k);
        for(i = 0; i < 20 ; i++)
            for(j = 0; j < 30 ; j++) k+=i*3-j;
        System.out.println("k = " + k);
        for(i = 0; i < 6 ; i++){
            k = (k * 13) + (i << 2) - (k / 3) + (k % 17);
            k = k & 4095 | (i ^ k);
            if (k <= 0) k = i + 1;
            k = k * 5 - i * 3 + (k % 9);
        }
        System.out.println("k = " + k);
    }

    public static void main(String[] args) {
        Unguarded u = new Unguarded();
        u.add(args.length);
        System.out.println(u.total);
    }
}
