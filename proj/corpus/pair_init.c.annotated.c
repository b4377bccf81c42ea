/*@
  requires \true;
  assigns a[i .. i];
  ensures a[i] == v;
*/
void StoreAt(int* a, int i, int v) {
    a[i] = v;
}

/*@
  requires n >= 2 && n <= len_a;
  assigns a[0 .. 1];
  ensures a[0] == 5 && a[1] == 6 && \result == 0;
*/
int PairInit(int* a, int n) {
    StoreAt(a, 0, 5);
    StoreAt(a, 1, 6);
    return 0;
}
