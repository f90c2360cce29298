private void S(int k){
    int i, j;
    int[] A;
    A = new int[100];
    A[0] = 105;
    A[1] = 127;
    A[2] = 51;
    A[3] = 16;
    A[4] = 44;
    A[5] = 74;
    A[6] = 84;
    System.out.println("k = " + k);
    for(i = 0; i < 7 ; i++){
        System.out.println("A["+ i + "] = " + A[i]);
    }
    for(i = 0; i < 7 ; i++){
        A[i] = k * i;
        System.out.println("A["+ i + "] = " + A[i]);
    }
    for(i = 0; i < 100 ; i++){
        A[i] += k + i * 5;
        System.out.println("A["+ i + "] = " + A[i]);
    }
}
