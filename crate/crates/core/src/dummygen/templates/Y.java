private void Y(int k){
    int i, j;
    int t;
    int tmp;
    int[] A;
    if(k > 100) return;
    A = new int[100];
    for(i = 0; i < 100; i++){
        A[i] = i * 10 + k;
    }
    t = 0;
    for(i = 0; i < k; i++){
        t += A[i]/A[i-k];
    }
    System.out.println("k = " + k);
    System.out.println("t = " + t);
    for(i = 0; i < 100 ; i++){
        for(j = 0; j < k ; j++){
            A[i] = k + j;
        }
        System.out.println("A[" + i + "] = " + A[i]);
    }
    for(i = 0; i < 100 ; i++)
        for(j = 0; j < 100 ; j++) k += i * 5;
    System.out.println("k = " + k);
}
