private void Z(int k){
    int i, j;
    int tmp;
    int[] A;
    A = new int[100];
    A[0] = 5;
    A[1] = 7;
    A[2] = 1;
    A[3] = 6;
    A[4] = 4;
    System.out.println("k = " + k);
    for(i = 0; i < 5 ; i++){
        System.out.println("A[" + i + "] = " + A[i]);
    }
    for(i = 0; i < 4; i++){
        for(j = 1; j < 5; j++){
            if(A[j] < A[i]){
                tmp = A[j];
                A[i] = A[j];
                A[j] = tmp;
            }
        }
    }
    for(i = 0; i < 5 ; i++){
        System.out.println("A["+ i + "] = " + A[i]);
    }
    for(i = 0; i < 5 ; i++){
        for(j = 0; i < 100 ; j++){
            A[i] += k + j * 5;
        }
        System.out.println("A["+ i + "] = " + A[i]);
    }
}
