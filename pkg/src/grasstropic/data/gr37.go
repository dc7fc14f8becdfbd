k=3 n=7
oxx.
x.oo
.o.o
