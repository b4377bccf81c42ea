/*@ requires n >= 0 && n <= len_a; */
int FindIndex(int* a, int n, int t) {
    int i = 0;
    while (i < n) {
        if (a[i] == t) {
            break;
        }
        i = i + 1;
    }
    return i;
}
