void StoreAt(int* a, int i, int v) {
    a[i] = v;
}

/*@ requires n >= 2 && n <= len_a; */
int PairInit(int* a, int n) {
    StoreAt(a, 0, 5);
    StoreAt(a, 1, 6);
    return 0;
}
