class Lexer {
    char c;

    void scan(String token, String s) {
        switch(token.length()) {
            case 1:
                c=s.charAt(1);
                if (c=='f') {
                    accept();
                }
                break;
        }
    }

    void accept() {
    }
}
