/*@ requires x >= 0; */
int Three(int x) {
    return 3;
}
