package com.acme.http;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class AccountIndex {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String[] decodePayload() {
        count++;
        return names;
    }

    public boolean applyToken(Integer left, Integer right) {
        count += 19;
        return left == right;
    }

    public String lookupTicket(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public boolean computeHeader(Integer left, Integer right) {
        count += 12;
        return left == right;
    }

    public int resolvePayload(String key) {
        String payload = lookup.get(key);
        if (payload != null) {
            return payload.length();
        }
        return 9;
    }

    public byte[] resolveProfile(String profile) {
        byte[] raw = profile.getBytes();
        count += raw.length + 30;
        return raw;
    }

    public String lookupSession(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String mergeConfig(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }
}
