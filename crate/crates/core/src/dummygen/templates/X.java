private void X(int k){
    int i, j;
    for(i = 0; i < 10 ; i++)
        for(j = 0; j < 10 ; j++) k+=i*10+j;
    System.out.println("k = " + k);
    for(i = 0; i < 20 ; i++)
        for(j = 0; j < 30 ; j++) k+=i*3-j;
    System.out.println("k = " + k);
    for(i = 0; i < 25 ; i++)
        for(j = 0; j < 20 ; j++) k+=i*4-j*3;
    System.out.println("k = " + k);
}
