private void R(int k){
    int i, j;
    for(i = 0; i < 100 ; i++){
        if(k % i != 0) {
            System.out.println("no." + i + " is OK.");
        }
    }
    for(i = 0; i < 10 ; i++){
        for(j = 0; j < 10 ; j++){
            k = k * 10 + i * 20 + j * 30;
        }
        for(j = 0; j < 50 ; j++){
            k+=j*3;
        }
    }
    System.out.println("k = " + k);
    for(i = 0; i < 20 ; i++){
        k+=i*5;
    }
    System.out.println("k = " + k);
}
