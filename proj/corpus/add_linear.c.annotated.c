/*@
  requires n >= 0;
  assigns \nothing;
  ensures (n <= 0 && \result == \old(x)) || (0 < n && \result == \old(x) + c*n);
*/
int AddLinear(int x, int c, int n) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= n;
      loop invariant x == \old(x) + c*i;
      loop assigns i, x;
    */
    while (i < n) {
        x = x + c;
        i = i + 1;
    }
    return x;
}
